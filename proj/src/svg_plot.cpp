#include "uavbs/svg_plot.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "uavbs/types.hpp"

namespace uavbs {

int CsvTable::column(const std::string& name) const
{
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : int(it - header.begin());
}

namespace {

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(line);
    while (std::getline(in, cur, ','))
        out.push_back(cur);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string label(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

CsvTable parse_csv(const std::string& text)
{
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        auto fields = split(line);
        if (t.header.empty()) {
            t.header = std::move(fields);
            continue;
        }
        if (fields.size() != t.header.size())
            throw ConfigError("CSV line " + std::to_string(lineno) + " has " + std::to_string(fields.size())
                              + " fields, expected " + std::to_string(t.header.size()));
        std::vector<double> row;
        for (const auto& f : fields) {
            double v = 0.0;
            const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
            if (res.ec != std::errc() || res.ptr != f.data() + f.size())
                throw ConfigError("CSV line " + std::to_string(lineno) + ": \"" + f + "\" is not a number");
            row.push_back(v);
        }
        t.rows.push_back(std::move(row));
    }
    if (t.header.empty())
        throw ConfigError("CSV is empty");
    return t;
}

std::string svg_line_chart(const CsvTable& table, const std::string& x_column,
                           const std::vector<std::string>& y_columns, const PlotOptions& opts)
{
    const int xi = table.column(x_column);
    if (xi < 0)
        throw ConfigError("CSV has no column \"" + x_column + "\"");
    std::vector<int> yi;
    for (const auto& c : y_columns) {
        const int i = table.column(c);
        if (i < 0)
            throw ConfigError("CSV has no column \"" + c + "\"");
        yi.push_back(i);
    }
    const int window = std::max(1, opts.smooth);

    // Smoothed series, one per y column.
    std::vector<std::vector<double>> ys(yi.size());
    for (std::size_t k = 0; k < yi.size(); ++k) {
        double sum = 0.0;
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            sum += table.rows[r][std::size_t(yi[k])];
            if (r >= std::size_t(window))
                sum -= table.rows[r - std::size_t(window)][std::size_t(yi[k])];
            ys[k].push_back(sum / double(std::min<std::size_t>(r + 1, std::size_t(window))));
        }
    }

    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& row : table.rows) {
        x0 = std::min(x0, row[std::size_t(xi)]);
        x1 = std::max(x1, row[std::size_t(xi)]);
    }
    for (const auto& s : ys)
        for (double v : s) {
            y0 = std::min(y0, v);
            y1 = std::max(y1, v);
        }
    if (table.rows.empty()) {
        x0 = y0 = 0.0;
        x1 = y1 = 1.0;
    }
    if (x1 == x0)
        x1 = x0 + 1.0;
    if (y1 == y0) {
        y0 -= 0.5;
        y1 += 0.5;
    }

    const double left = 64, right = 16, top = 32, bottom = 40;
    const double pw = opts.width - left - right, ph = opts.height - top - bottom;
    auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return top + (1.0 - (y - y0) / (y1 - y0)) * ph; };

    static const char* colors[] = {"#1f77b4", "#2ca02c", "#d62728", "#9467bd", "#ff7f0e", "#8c564b"};
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\"" << opts.height
        << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << fmt(left) << "\" y=\"18\" font-size=\"13\">" << escape(opts.title) << "</text>\n";
    svg << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(pw) << "\" height=\""
        << fmt(ph) << "\" fill=\"none\" stroke=\"#888\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double yv = y0 + (y1 - y0) * i / 4.0;
        const double xv = x0 + (x1 - x0) * i / 4.0;
        svg << "<text x=\"" << fmt(left - 4) << "\" y=\"" << fmt(py(yv) + 4) << "\" text-anchor=\"end\">"
            << label(yv) << "</text>\n";
        svg << "<text x=\"" << fmt(px(xv)) << "\" y=\"" << fmt(top + ph + 16) << "\" text-anchor=\"middle\">"
            << label(xv) << "</text>\n";
    }
    svg << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"" << fmt(opts.height - 6.0)
        << "\" text-anchor=\"middle\">" << escape(x_column) << "</text>\n";

    for (std::size_t k = 0; k < ys.size(); ++k) {
        const char* color = colors[k % std::size(colors)];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t r = 0; r < ys[k].size(); ++r)
            svg << (r ? " " : "") << fmt(px(table.rows[r][std::size_t(xi)])) << ',' << fmt(py(ys[k][r]));
        svg << "\"/>\n";
        svg << "<text x=\"" << fmt(left + pw - 4) << "\" y=\"" << fmt(top + 14 + 14.0 * double(k))
            << "\" text-anchor=\"end\" fill=\"" << color << "\">" << escape(y_columns[k]) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace uavbs
