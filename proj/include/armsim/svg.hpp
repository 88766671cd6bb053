#pragma once

#include <algorithm>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "armsim/csv.hpp"
#include "armsim/types.hpp"

namespace armsim {

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Self-contained SVG line plot. Polyline points carry the data verbatim
/// (scaled), so plots can be compared structurally in tests.
inline void write_svg_plot(std::ostream& out, const std::string& title,
                           const std::vector<SvgSeries>& series,
                           int width = 800, int height = 480) {
    static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        for (double v : s.x) { xmin = std::min(xmin, v); xmax = std::max(xmax, v); }
        for (double v : s.y) { ymin = std::min(ymin, v); ymax = std::max(ymax, v); }
    }
    if (!(xmax > xmin)) { xmin -= 0.5; xmax += 0.5; }
    if (!(ymax > ymin)) { ymin -= 0.5; ymax += 0.5; }
    const double ml = 60, mr = 20, mt = 40, mb = 40;
    const double pw = width - ml - mr, ph = height - mt - mb;
    auto sx = [&](double v) { return ml + (v - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double v) { return mt + (ymax - v) / (ymax - ymin) * ph; };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
        << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\""
        << ph << "\" fill=\"none\" stroke=\"#333\"/>\n";
    // axis extents
    out << "<text x=\"" << ml << "\" y=\"" << height - 12
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << csv_double(xmin)
        << "</text>\n";
    out << "<text x=\"" << ml + pw << "\" y=\"" << height - 12
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << csv_double(xmax) << "</text>\n";
    out << "<text x=\"" << ml - 6 << "\" y=\"" << mt + ph
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << csv_double(ymin) << "</text>\n";
    out << "<text x=\"" << ml - 6 << "\" y=\"" << mt + 10
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << csv_double(ymax) << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        out << "<polyline fill=\"none\" stroke=\"" << kColors[si % 8]
            << "\" stroke-width=\"1.5\" points=\"";
        const std::size_t n = std::min(s.x.size(), s.y.size());
        for (std::size_t i = 0; i < n; ++i)
            out << csv_double(sx(s.x[i])) << "," << csv_double(sy(s.y[i])) << " ";
        out << "\"/>\n";
        out << "<text x=\"" << ml + 8 << "\" y=\"" << mt + 16 + 14 * static_cast<double>(si)
            << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << kColors[si % 8]
            << "\">" << s.label << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace armsim
