#include "qnl/output.hpp"

#include <cstdio>
#include <stdexcept>

namespace qnl {

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& os, const ConfigMap& config, const std::vector<std::string>& columns)
    : os_(os), ncol_(columns.size()) {
  for (const auto& [k, v] : config) os_ << "# " << k << '=' << v << '\n';
  for (size_t i = 0; i < columns.size(); ++i) os_ << (i ? "," : "") << columns[i];
  os_ << '\n';
}

void CsvWriter::row(const std::vector<Cell>& cells) {
  if (cells.size() != ncol_) throw std::invalid_argument("CSV row has the wrong number of cells");
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) os_ << ',';
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>)
            os_ << format_real(v);
          else
            os_ << v;
        },
        cells[i]);
  }
  os_ << '\n';
}

}  // namespace qnl
