#include "eat/env/scenario.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace eat::env {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
  throw std::runtime_error("scenario line " + std::to_string(line) + ": " + what);
}

}  // namespace

Scenario parse_scenario(std::istream& in) {
  Scenario sc;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::string verb;
    if (!(ls >> verb)) continue;

    if (verb == "arrival") {
      Arrival a;
      if (!(ls >> a.time >> a.parallelism)) fail(lineno, "expected: arrival <t> <parallelism>");
      if (!sc.arrivals.empty() && a.time < sc.arrivals.back().time)
        fail(lineno, "arrival times must be non-decreasing");
      sc.arrivals.push_back(a);
    } else if (verb == "decide") {
      ScriptedDecision d;
      d.line = lineno;
      if (!(ls >> d.time >> d.task_id >> d.steps))
        fail(lineno, "expected: decide <t> <task_id> <steps> <server...>");
      std::string tok;
      while (ls >> tok) {
        const auto eq = tok.find('=');
        if (eq != std::string::npos) {
          const std::string key = tok.substr(0, eq);
          double val = 0;
          try {
            val = std::stod(tok.substr(eq + 1));
          } catch (const std::exception&) {
            fail(lineno, "bad override value in '" + tok + "'");
          }
          if (key == "init")
            d.init_override = val;
          else if (key == "exec")
            d.exec_override = val;
          else
            fail(lineno, "unknown override '" + key + "'");
        } else {
          try {
            d.server_ids.push_back(std::stoi(tok));
          } catch (const std::exception&) {
            fail(lineno, "bad server id '" + tok + "'");
          }
        }
      }
      if (d.server_ids.empty()) fail(lineno, "decide needs at least one server id");
      if (!sc.decisions.empty() && d.time < sc.decisions.back().time)
        fail(lineno, "decision times must be non-decreasing");
      sc.decisions.push_back(d);
    } else if (verb == "noop") {
      ScriptedDecision d;
      d.line = lineno;
      d.noop = true;
      if (!(ls >> d.time)) fail(lineno, "expected: noop <t>");
      if (!sc.decisions.empty() && d.time < sc.decisions.back().time)
        fail(lineno, "decision times must be non-decreasing");
      sc.decisions.push_back(d);
    } else {
      fail(lineno, "unknown record '" + verb + "'");
    }
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  return parse_scenario(in);
}

}  // namespace eat::env
