#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "saef/indicators.hpp"
#include "saef/qdta.hpp"

namespace saef {

/// Indicator-by-column matrix. Single-city tables have one column per
/// objective (`UET`, `SOT`, `SOF`); cross-city tables use `city:UET` etc.
struct ComparisonTable {
  struct Row {
    std::string theme;
    std::string indicator;
    std::string unit;
    std::vector<std::optional<double>> values;  // empty optional means NA
  };
  std::vector<std::string> columns;
  std::vector<Row> rows;
};

ComparisonTable make_comparison(const std::vector<std::pair<Objective, const IndicatorReport*>>& reports);

/// `theme,indicator,unit,<columns...>`
void write_comparison(const ComparisonTable& table, const std::filesystem::path& path);
ComparisonTable read_comparison(const std::filesystem::path& path);

/// Joins per-city tables column-wise. Every table must carry the same
/// indicator rows; the output follows the standard indicator order. Throws
/// std::invalid_argument naming missing or extra indicators.
ComparisonTable compare_cities(const std::vector<std::pair<std::string, ComparisonTable>>& cities);

/// Horizontal bar chart, one group per indicator, each bar scaled by the
/// largest value of its row. Throws std::invalid_argument on an empty table.
std::string render_chart_svg(const ComparisonTable& table);
void emit_chart(const ComparisonTable& table, const std::filesystem::path& path);

/// Width in pixels of the full-scale bar.
inline constexpr double kChartBarWidth = 400.0;

}  // namespace saef
