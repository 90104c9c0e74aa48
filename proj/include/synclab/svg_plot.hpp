#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "synclab/io.hpp"
#include "synclab/records.hpp"

namespace synclab {

struct PlotSpec {
    std::string x;
    std::string y;
    std::string series;  // empty: one series
    bool log_y = false;
};

namespace detail {

struct PlotPoint {
    double x = 0.0, y = 0.0, err = 0.0;
};

inline std::string svg_coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

inline std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

}  // namespace detail

// Hand-emitted SVG (fixed 800x600 viewBox): one polyline per series value,
// axis labels from the column names, vertical error bars when a
// "<y>_stderr" or "stderr" column is present.
inline void emit_plot(const std::string& csv_path, const PlotSpec& spec,
                      const std::string& out_path) {
    const CsvTable table = read_csv(csv_path);
    if (table.rows.empty())
        throw invalid_parameter("emit_plot: no data rows in " + csv_path);
    const int xi = table.column_index(spec.x);
    if (xi < 0) throw invalid_parameter("emit_plot: missing column '" + spec.x + "'");
    const int yi = table.column_index(spec.y);
    if (yi < 0) throw invalid_parameter("emit_plot: missing column '" + spec.y + "'");
    int si = -1;
    if (!spec.series.empty()) {
        si = table.column_index(spec.series);
        if (si < 0) throw invalid_parameter("emit_plot: missing column '" + spec.series + "'");
    }
    int ei = table.column_index(spec.y + "_stderr");
    if (ei < 0) ei = table.column_index("stderr");

    std::map<std::string, std::vector<detail::PlotPoint>> series;
    for (const auto& row : table.rows) {
        detail::PlotPoint p;
        p.x = std::stod(row[static_cast<std::size_t>(xi)]);
        p.y = std::stod(row[static_cast<std::size_t>(yi)]);
        if (ei >= 0) p.err = std::stod(row[static_cast<std::size_t>(ei)]);
        const std::string key = (si >= 0) ? row[static_cast<std::size_t>(si)] : spec.y;
        if (spec.log_y) {
            if (p.y <= 0.0)
                throw domain_error("emit_plot: log_y requires positive y values");
            p.err = (p.y > p.err) ? p.err / p.y : 0.0;  // approximate log-scale bar
            p.y = std::log10(p.y);
        }
        series[key].push_back(p);
    }
    for (auto& [key, pts] : series)
        std::sort(pts.begin(), pts.end(),
                  [](const detail::PlotPoint& a, const detail::PlotPoint& b) { return a.x < b.x; });

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& [key, pts] : series)
        for (const auto& p : pts) {
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y - p.err);
            ymax = std::max(ymax, p.y + p.err);
        }
    if (xmax == xmin) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (ymax == ymin) {
        ymin -= 0.5;
        ymax += 0.5;
    }

    const double width = 800, height = 600;
    const double ml = 80, mr = 30, mt = 40, mb = 60;
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr); };
    auto py = [&](double y) { return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb); };

    static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                     "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" "
           "font-family=\"monospace\" font-size=\"13\">\n";
    svg += "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
    // axes
    svg += "<line x1=\"" + detail::svg_coord(ml) + "\" y1=\"" + detail::svg_coord(height - mb) +
           "\" x2=\"" + detail::svg_coord(width - mr) + "\" y2=\"" +
           detail::svg_coord(height - mb) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + detail::svg_coord(ml) + "\" y1=\"" + detail::svg_coord(mt) +
           "\" x2=\"" + detail::svg_coord(ml) + "\" y2=\"" + detail::svg_coord(height - mb) +
           "\" stroke=\"black\"/>\n";
    // ticks
    for (int k = 0; k <= 4; ++k) {
        const double xv = xmin + (xmax - xmin) * k / 4;
        const double yv = ymin + (ymax - ymin) * k / 4;
        svg += "<line x1=\"" + detail::svg_coord(px(xv)) + "\" y1=\"" +
               detail::svg_coord(height - mb) + "\" x2=\"" + detail::svg_coord(px(xv)) +
               "\" y2=\"" + detail::svg_coord(height - mb + 5) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + detail::svg_coord(px(xv)) + "\" y=\"" +
               detail::svg_coord(height - mb + 20) + "\" text-anchor=\"middle\">" +
               detail::tick_label(xv) + "</text>\n";
        svg += "<line x1=\"" + detail::svg_coord(ml - 5) + "\" y1=\"" + detail::svg_coord(py(yv)) +
               "\" x2=\"" + detail::svg_coord(ml) + "\" y2=\"" + detail::svg_coord(py(yv)) +
               "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + detail::svg_coord(ml - 8) + "\" y=\"" +
               detail::svg_coord(py(yv) + 4) + "\" text-anchor=\"end\">" + detail::tick_label(yv) +
               "</text>\n";
    }
    // axis labels
    svg += "<text x=\"" + detail::svg_coord((ml + width - mr) / 2) + "\" y=\"" +
           detail::svg_coord(height - 15) + "\" text-anchor=\"middle\">" + spec.x + "</text>\n";
    svg += "<text x=\"20\" y=\"" + detail::svg_coord((mt + height - mb) / 2) +
           "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " +
           detail::svg_coord((mt + height - mb) / 2) + ")\">" +
           (spec.log_y ? "log10(" + spec.y + ")" : spec.y) + "</text>\n";

    int color = 0;
    for (const auto& [key, pts] : series) {
        const std::string stroke = kPalette[color % 8];
        std::string poly = "<polyline fill=\"none\" stroke=\"" + stroke +
                           "\" stroke-width=\"1.5\" points=\"";
        for (const auto& p : pts)
            poly += detail::svg_coord(px(p.x)) + "," + detail::svg_coord(py(p.y)) + " ";
        poly += "\"/>\n";
        svg += poly;
        for (const auto& p : pts) {
            svg += "<circle cx=\"" + detail::svg_coord(px(p.x)) + "\" cy=\"" +
                   detail::svg_coord(py(p.y)) + "\" r=\"2.5\" fill=\"" + stroke + "\"/>\n";
            if (p.err > 0.0) {
                svg += "<line x1=\"" + detail::svg_coord(px(p.x)) + "\" y1=\"" +
                       detail::svg_coord(py(p.y - p.err)) + "\" x2=\"" +
                       detail::svg_coord(px(p.x)) + "\" y2=\"" +
                       detail::svg_coord(py(p.y + p.err)) + "\" stroke=\"" + stroke + "\"/>\n";
            }
        }
        // legend entry
        const double ly = mt + 18.0 * color;
        svg += "<line x1=\"" + detail::svg_coord(width - mr - 140) + "\" y1=\"" +
               detail::svg_coord(ly) + "\" x2=\"" + detail::svg_coord(width - mr - 115) +
               "\" y2=\"" + detail::svg_coord(ly) + "\" stroke=\"" + stroke +
               "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + detail::svg_coord(width - mr - 110) + "\" y=\"" +
               detail::svg_coord(ly + 4) + "\">" +
               ((si >= 0) ? spec.series + "=" + key : key) + "</text>\n";
        ++color;
    }
    svg += "<text x=\"10\" y=\"20\">source: " + csv_path + " tool_version: " + tool_version() +
           "</text>\n";
    svg += "</svg>\n";

    std::ofstream out(out_path);
    if (!out) throw invalid_parameter("emit_plot: cannot open " + out_path);
    out << svg;
}

}  // namespace synclab
