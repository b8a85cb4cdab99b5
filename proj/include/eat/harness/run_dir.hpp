#pragma once

#include <string>
#include <vector>

namespace eat::harness {

/// Output directory for one CLI invocation. An explicit path is created as
/// given (parents included); otherwise a timestamped directory appears under
/// ./runs.
struct RunDir {
  std::string path;

  static RunDir create(const std::string& requested, const std::string& verb);

  std::string file(const std::string& name) const { return path + "/" + name; }
};

/// Plain CSV writer: header row then data rows, LF line endings, no quoting
/// (callers keep commas out of the fields).
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace eat::harness
