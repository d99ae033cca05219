#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace mibbo {

// Deterministic CSV plumbing: shortest round-trip numbers, '.' decimal
// separator, LF line endings, RFC-4180 quoting.

std::string csv_number(double v);
std::string csv_number(long long v);
std::string csv_number(unsigned long long v);
inline std::string csv_number(int v) {
  return csv_number(static_cast<long long>(v));
}
inline std::string csv_number(long v) {
  return csv_number(static_cast<long long>(v));
}
inline std::string csv_number(unsigned int v) {
  return csv_number(static_cast<unsigned long long>(v));
}
inline std::string csv_number(unsigned long v) {
  return csv_number(static_cast<unsigned long long>(v));
}

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<std::string> fields);  // arity-checked
  std::string render() const;
  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Throws std::runtime_error naming the path on failure.
void write_text_file(const std::filesystem::path& path,
                     const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

// Parses RFC-4180 text (quoted fields, doubled quotes, CRLF or LF) into
// rows of fields; the header row is returned like any other.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

}  // namespace mibbo
