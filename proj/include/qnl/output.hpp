#pragma once

#include <map>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace qnl {

/// Resolved run configuration, emitted verbatim into result headers.
using ConfigMap = std::map<std::string, std::string>;

/// 17 significant digits, so values round-trip.
std::string format_real(double x);

/// CSV with "# key=value" header lines for the config, then a column header row.
class CsvWriter {
 public:
  using Cell = std::variant<double, long long, std::string>;

  CsvWriter(std::ostream& os, const ConfigMap& config, const std::vector<std::string>& columns);
  void row(const std::vector<Cell>& cells);

 private:
  std::ostream& os_;
  size_t ncol_;
};

}  // namespace qnl
