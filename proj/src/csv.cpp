#include "compdbn/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace compdbn::csv {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.emplace_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

Table parse(std::string_view text, const std::vector<std::string>& expected_header) {
  Table table;
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    auto fields = split(line);
    if (!have_header) {
      if (fields != expected_header) {
        std::string want;
        for (const auto& h : expected_header) want += (want.empty() ? "" : ",") + h;
        throw CsvError("line " + std::to_string(line_no) + ": expected header '" + want + "'");
      }
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != expected_header.size())
      throw CsvError("line " + std::to_string(line_no) + ": expected " +
                     std::to_string(expected_header.size()) + " fields, got " +
                     std::to_string(fields.size()));
    table.rows.push_back(std::move(fields));
    table.line_numbers.push_back(line_no);
  }
  if (!have_header) throw CsvError("missing CSV header");
  return table;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;  // no "-0"
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 15);
  if (ec != std::errc{}) throw CsvError("cannot format number");
  return std::string(buf, ptr);
}

double parse_double(const std::string& field, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(v))
    throw CsvError("line " + std::to_string(line) + ": invalid number '" + field + "'");
  return v;
}

int parse_int(const std::string& field, std::size_t line) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw CsvError("line " + std::to_string(line) + ": invalid integer '" + field + "'");
  return v;
}

}  // namespace compdbn::csv
