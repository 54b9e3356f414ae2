#include "anderson1d/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace anderson::cli {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string fmt(std::int64_t x) { return std::to_string(x); }
std::string fmt(std::uint64_t x) { return std::to_string(x); }
std::string fmt(bool x) { return x ? "true" : "false"; }

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& columns)
    : path_(path),
      out_(path, std::ios::binary | std::ios::trunc),
      num_columns_(columns.size()) {
  if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
  write_row(columns);
}

void CsvWriter::write_row(const std::vector<std::string>& cells) {
  if (cells.size() != num_columns_) {
    throw std::logic_error("row width mismatch in " + path_);
  }
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k > 0) out_ << ',';
    out_ << cells[k];
  }
  out_ << '\n';
}

}  // namespace anderson::cli
