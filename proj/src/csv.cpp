#include "saef/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace saef {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
  while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
  return std::string(s.substr(a, b - a));
}

// With `max_fields` set, unquoted commas past the last column stay in it.
std::vector<std::string> split_line(std::string_view line, std::size_t max_fields = 0) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
      was_quoted = true;
    } else if (c == ',' && (max_fields == 0 || out.size() + 1 < max_fields)) {
      out.push_back(was_quoted ? cur : trim(cur));
      cur.clear();
      was_quoted = false;
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(was_quoted ? cur : trim(cur));
  return out;
}

}  // namespace

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw LoadError(source + ": missing column '" + std::string(name) + "'");
}

CsvTable parse_csv(std::string_view text, std::string source) {
  CsvTable table;
  table.source = std::move(source);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) {
      if (end == text.size()) break;
      continue;
    }
    if (table.header.empty()) {
      table.header = split_line(line);
      continue;
    }
    // Unquoted commas inside the final column (WKT) stay in that field.
    auto fields = split_line(line, table.header.size());
    if (fields.size() < table.header.size()) {
      throw LoadError(table.source + ": expected " + std::to_string(table.header.size()) +
                      " fields, got " + std::to_string(fields.size()) + ", row " +
                      std::to_string(line_no));
    }
    table.rows.push_back({line_no, std::move(fields)});
    if (end == text.size()) break;
  }
  if (table.header.empty()) throw LoadError(table.source + ": empty file, no header");
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), path.string());
}

double field_double(const CsvTable& table, const CsvTable::Row& row, std::size_t col) {
  const std::string& s = row.fields.at(col);
  double value = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (s.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw LoadError(table.source + ": non-numeric field '" + table.header[col] + "', row " +
                    std::to_string(row.line));
  }
  return value;
}

std::int64_t field_int(const CsvTable& table, const CsvTable::Row& row, std::size_t col) {
  const std::string& s = row.fields.at(col);
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw LoadError(table.source + ": non-integer field '" + table.header[col] + "', row " +
                    std::to_string(row.line));
  }
  return value;
}

std::string format_double(double value) {
  if (value == 0.0) return "0";  // folds -0 into 0
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << csv_escape(fields[i]);
  }
  out << '\n';
}

}  // namespace saef
