#include "eat/harness/run_dir.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace eat::harness {

RunDir RunDir::create(const std::string& requested, const std::string& verb) {
  namespace fs = std::filesystem;
  std::string path = requested;
  if (path.empty()) {
    const auto now = std::chrono::system_clock::now();
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch());
    path = "runs/" + verb + "-" + std::to_string(secs.count());
    // Avoid clobbering a same-second run.
    int suffix = 1;
    while (fs::exists(path)) path = "runs/" + verb + "-" + std::to_string(secs.count()) + "-" +
                                    std::to_string(suffix++);
  }
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + path + "': " + ec.message());
  return RunDir{path};
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary);  // binary: LF endings everywhere
  if (!out) throw std::runtime_error("cannot open csv for writing: " + path);
  const auto write_row = [&out](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << ',';
      out << row[i];
    }
    out << '\n';
  };
  write_row(header);
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw std::invalid_argument("csv row width does not match the header");
    write_row(row);
  }
  if (!out) throw std::runtime_error("csv write failed: " + path);
}

}  // namespace eat::harness
