#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace stiffplate {

/// Shortest round-trip decimal representation.
std::string format_number(double v);

/// Comma-separated file with a header row and LF line endings.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);

 private:
  std::ofstream out_;
  std::size_t columns_;
};

}  // namespace stiffplate
