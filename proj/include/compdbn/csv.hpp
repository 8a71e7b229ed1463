#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace compdbn::csv {

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Header plus rows of a simple comma-separated file without quoting.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // source line of each row
};

/// Splits `text` into rows; blank lines are skipped and every row must have as
/// many fields as `expected_header`, which must match the first line.
Table parse(std::string_view text, const std::vector<std::string>& expected_header);

std::string read_file(const std::string& path);

/// Shortest-but-stable decimal form with 15 significant digits, independent of
/// the global locale.
std::string format_number(double value);

double parse_double(const std::string& field, std::size_t line);
int parse_int(const std::string& field, std::size_t line);

}  // namespace compdbn::csv
