#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace anderson::cli {

/// Fixed float formatting for all emitted data: 17 significant digits,
/// enough to reproduce any double bit-exactly.
std::string fmt(double x);
std::string fmt(std::int64_t x);
std::string fmt(std::uint64_t x);
std::string fmt(bool x);

/// Minimal CSV emitter: mandatory header row, comma separators, LF line
/// endings, binary stream (no platform newline translation).
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);

  void write_row(const std::vector<std::string>& cells);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
  std::size_t num_columns_;
};

}  // namespace anderson::cli
