#include "saef/chart.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "saef/csv.hpp"

namespace saef {

ComparisonTable make_comparison(const std::vector<std::pair<Objective, const IndicatorReport*>>& reports) {
  if (reports.empty()) throw std::invalid_argument("no indicator reports to compare");
  ComparisonTable t;
  for (const auto& [obj, report] : reports) t.columns.emplace_back(to_string(obj));
  for (std::size_t i = 0; i < kIndicatorCount; ++i) {
    const Indicator& first = reports.front().second->rows[i];
    ComparisonTable::Row row{std::string(first.theme), std::string(first.name), std::string(first.unit), {}};
    for (const auto& [obj, report] : reports) row.values.push_back(report->rows[i].value);
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_comparison(const ComparisonTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  std::vector<std::string> header{"theme", "indicator", "unit"};
  header.insert(header.end(), table.columns.begin(), table.columns.end());
  write_csv_row(out, header);
  for (const auto& row : table.rows) {
    std::vector<std::string> fields{row.theme, row.indicator, row.unit};
    for (const auto& v : row.values) fields.push_back(v ? format_double(*v) : "NA");
    write_csv_row(out, fields);
  }
}

ComparisonTable read_comparison(const std::filesystem::path& path) {
  const CsvTable csv = read_csv(path);
  const std::size_t c_theme = csv.column("theme"), c_name = csv.column("indicator"), c_unit = csv.column("unit");
  if (c_theme != 0 || c_name != 1 || c_unit != 2 || csv.header.size() < 4) {
    throw LoadError(csv.source + ": expected theme,indicator,unit followed by value columns");
  }
  ComparisonTable t;
  t.columns.assign(csv.header.begin() + 3, csv.header.end());
  for (const auto& r : csv.rows) {
    ComparisonTable::Row row{r.fields[0], r.fields[1], r.fields[2], {}};
    for (std::size_t c = 3; c < csv.header.size(); ++c) {
      if (r.fields[c] == "NA") row.values.emplace_back();
      else row.values.emplace_back(field_double(csv, r, c));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

ComparisonTable compare_cities(const std::vector<std::pair<std::string, ComparisonTable>>& cities) {
  if (cities.size() < 2) throw std::invalid_argument("at least two comparison tables are needed");

  // Standard indicators first in report order, anything else after, by name.
  std::vector<std::string> order(kIndicatorNames.begin(), kIndicatorNames.end());
  std::set<std::string> all;
  for (const auto& [label, table] : cities) {
    for (const auto& row : table.rows) all.insert(row.indicator);
  }
  for (const auto& name : all) {
    if (std::find(order.begin(), order.end(), name) == order.end()) order.push_back(name);
  }
  std::erase_if(order, [&](const std::string& n) { return !all.count(n); });

  std::string problems;
  for (const auto& [label, table] : cities) {
    std::set<std::string> have;
    for (const auto& row : table.rows) have.insert(row.indicator);
    for (const auto& name : order) {
      if (!have.count(name)) problems += "\n  " + label + " is missing '" + name + "'";
    }
  }
  if (!problems.empty()) throw std::invalid_argument("indicator sets differ:" + problems);

  ComparisonTable out;
  for (const auto& [label, table] : cities) {
    for (const auto& c : table.columns) out.columns.push_back(label + ":" + c);
  }
  for (const auto& name : order) {
    ComparisonTable::Row merged;
    for (const auto& [label, table] : cities) {
      const auto it = std::find_if(table.rows.begin(), table.rows.end(),
                                   [&](const ComparisonTable::Row& r) { return r.indicator == name; });
      if (merged.indicator.empty()) merged = {it->theme, it->indicator, it->unit, {}};
      merged.values.insert(merged.values.end(), it->values.begin(), it->values.end());
    }
    out.rows.push_back(std::move(merged));
  }
  return out;
}

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string color_for(const std::string& column, std::size_t position) {
  const auto colon = column.rfind(':');
  const std::string key = colon == std::string::npos ? column : column.substr(colon + 1);
  if (key == "UET") return "#1f77b4";
  if (key == "SOT") return "#ff7f0e";
  if (key == "SOF") return "#2ca02c";
  static const char* palette[] = {"#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return palette[position % std::size(palette)];
}

// Fixed-precision coordinates keep the output independent of locale and of
// shortest-representation quirks.
std::string px(double v) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s.setf(std::ios::fixed);
  s.precision(2);
  s << v;
  return s.str();
}

}  // namespace

std::string render_chart_svg(const ComparisonTable& table) {
  if (table.rows.empty() || table.columns.empty()) throw std::invalid_argument("empty comparison matrix");
  constexpr double kLabelWidth = 360.0, kBarHeight = 12.0, kBarGap = 2.0, kRowGap = 10.0, kTitle = 18.0;
  const double group_h = kTitle + static_cast<double>(table.columns.size()) * (kBarHeight + kBarGap) + kRowGap;
  const double legend_h = 24.0;
  const double width = kLabelWidth + kChartBarWidth + 140.0;
  const double height = legend_h + group_h * static_cast<double>(table.rows.size());

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(width) << "\" height=\"" << px(height)
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    const double x = 10.0 + static_cast<double>(c) * 110.0;
    svg << "<rect class=\"legend\" x=\"" << px(x) << "\" y=\"6.00\" width=\"12.00\" height=\"12.00\" fill=\""
        << color_for(table.columns[c], c) << "\"/>\n";
    svg << "<text x=\"" << px(x + 16.0) << "\" y=\"16.00\">" << xml_escape(table.columns[c]) << "</text>\n";
  }
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const double top = legend_h + group_h * static_cast<double>(r);
    double max = 0.0;
    for (const auto& v : row.values) {
      if (v && std::isfinite(*v)) max = std::max(max, std::abs(*v));
    }
    svg << "<g class=\"indicator\">\n";
    svg << "<text x=\"10.00\" y=\"" << px(top + 12.0) << "\">" << xml_escape(row.indicator);
    if (!row.unit.empty()) svg << " (" << xml_escape(row.unit) << ")";
    svg << "</text>\n";
    for (std::size_t c = 0; c < row.values.size(); ++c) {
      const auto& v = row.values[c];
      const double y = top + kTitle + static_cast<double>(c) * (kBarHeight + kBarGap);
      const double w = (v && max > 0.0) ? kChartBarWidth * std::abs(*v) / max : 0.0;
      svg << "<rect class=\"bar\" x=\"" << px(kLabelWidth) << "\" y=\"" << px(y) << "\" width=\"" << px(w)
          << "\" height=\"" << px(kBarHeight) << "\" fill=\"" << color_for(table.columns[c], c) << "\"/>\n";
      svg << "<text x=\"" << px(kLabelWidth + w + 4.0) << "\" y=\"" << px(y + kBarHeight - 2.0) << "\">"
          << (v ? xml_escape(format_double(*v)) : std::string("NA")) << "</text>\n";
    }
    svg << "</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void emit_chart(const ComparisonTable& table, const std::filesystem::path& path) {
  const std::string svg = render_chart_svg(table);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << svg;
}

}  // namespace saef
