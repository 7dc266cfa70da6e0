#pragma once

#include <string>
#include <vector>

namespace uavbs {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const; // -1 if absent
};

/// Numeric CSV with a header row. Throws ConfigError on ragged or
/// non-numeric rows.
CsvTable parse_csv(const std::string& text);

struct PlotOptions {
    std::string title;
    int width = 720;
    int height = 360;
    int smooth = 1; // trailing moving-average window
};

/// Standalone SVG line chart of `y_columns` against `x_column`.
std::string svg_line_chart(const CsvTable& table, const std::string& x_column,
                           const std::vector<std::string>& y_columns, const PlotOptions& opts);

} // namespace uavbs
