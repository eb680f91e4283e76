#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace saef {

/// Raised for any malformed input file. The message names the file position
/// (row and column) where one is known.
class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parsed CSV file. Rows keep their 1-based line number in the source file
/// (the header is line 1) so errors can point back at the offending row.
struct CsvTable {
  std::string source;
  std::vector<std::string> header;
  struct Row {
    std::size_t line = 0;
    std::vector<std::string> fields;
  };
  std::vector<Row> rows;

  /// Index of a named column; throws LoadError("missing column ...") if absent.
  std::size_t column(std::string_view name) const;
};

/// Reads a comma-separated file with optional double-quoted fields.
/// When a row has more fields than the header, the surplus is folded back
/// into the last column so an unquoted trailing WKT string still parses.
CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(std::string_view text, std::string source = "<memory>");

double field_double(const CsvTable& table, const CsvTable::Row& row, std::size_t col);
std::int64_t field_int(const CsvTable& table, const CsvTable::Row& row, std::size_t col);

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double value);

/// Quotes a field when it contains a comma, quote or newline.
std::string csv_escape(std::string_view field);

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace saef
