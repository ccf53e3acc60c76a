// SPDX-License-Identifier: Apache-2.0
#include "hprec/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace hprec {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                   "#9467bd", "#ff7f0e", "#8c564b"};

} // namespace

void write_svg_line_plot(const std::string& path, const std::string& title,
                         const std::string& x_label,
                         const std::string& y_label,
                         const std::vector<PlotSeries>& series) {
    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
    bool first = true;
    for (const PlotSeries& s : series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
                continue;
            if (first) {
                x_min = x_max = s.x[i];
                y_min = y_max = s.y[i];
                first = false;
            } else {
                x_min = std::min(x_min, s.x[i]);
                x_max = std::max(x_max, s.x[i]);
                y_min = std::min(y_min, s.y[i]);
                y_max = std::max(y_max, s.y[i]);
            }
        }
    }
    if (x_max <= x_min)
        x_max = x_min + 1.0;
    if (y_max <= y_min)
        y_max = y_min + 1.0;
    y_min -= 0.05 * (y_max - y_min);
    y_max += 0.05 * (y_max - y_min);

    constexpr double width = 640.0, height = 420.0;
    constexpr double ml = 70.0, mr = 20.0, mt = 40.0, mb = 50.0;
    const double pw = width - ml - mr;
    const double ph = height - mt - mb;
    const auto sx = [&](double x) {
        return ml + (x - x_min) / (x_max - x_min) * pw;
    };
    const auto sy = [&](double y) {
        return mt + ph - (y - y_min) / (y_max - y_min) * ph;
    };

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("write_svg_line_plot: cannot open " + path);

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
        << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << title
        << "</text>\n";

    // Frame and ticks.
    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw
        << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";
    constexpr int kTicks = 5;
    for (int i = 0; i <= kTicks; ++i) {
        const double fx = x_min + (x_max - x_min) * i / kTicks;
        const double fy = y_min + (y_max - y_min) * i / kTicks;
        out << "<line x1=\"" << sx(fx) << "\" y1=\"" << mt + ph << "\" x2=\""
            << sx(fx) << "\" y2=\"" << mt + ph + 5
            << "\" stroke=\"#444\"/>\n"
            << "<text x=\"" << sx(fx) << "\" y=\"" << mt + ph + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
            << "font-size=\"11\">" << fmt(fx) << "</text>\n"
            << "<line x1=\"" << ml - 5 << "\" y1=\"" << sy(fy) << "\" x2=\""
            << ml << "\" y2=\"" << sy(fy) << "\" stroke=\"#444\"/>\n"
            << "<text x=\"" << ml - 8 << "\" y=\"" << sy(fy) + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
            << "font-size=\"11\">" << fmt(fy) << "</text>\n";
    }
    out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"13\">" << x_label << "</text>\n"
        << "<text x=\"16\" y=\"" << mt + ph / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"13\" transform=\"rotate(-90 16 " << mt + ph / 2
        << ")\">" << y_label << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const PlotSeries& s = series[si];
        const char* color = kColors[si % 6];
        out << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.8\" points=\"";
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
                continue;
            out << fmt(sx(s.x[i])) << "," << fmt(sy(s.y[i])) << " ";
        }
        out << "\"/>\n";
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
                continue;
            out << "<circle cx=\"" << fmt(sx(s.x[i])) << "\" cy=\""
                << fmt(sy(s.y[i])) << "\" r=\"2.5\" fill=\"" << color
                << "\"/>\n";
        }
        const double ly = mt + 16.0 + 16.0 * static_cast<double>(si);
        out << "<line x1=\"" << ml + pw - 120 << "\" y1=\"" << ly
            << "\" x2=\"" << ml + pw - 95 << "\" y2=\"" << ly
            << "\" stroke=\"" << color << "\" stroke-width=\"1.8\"/>\n"
            << "<text x=\"" << ml + pw - 90 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label
            << "</text>\n";
    }
    out << "</svg>\n";
    if (!out)
        throw std::runtime_error("write_svg_line_plot: write failed for " +
                                 path);
}

} // namespace hprec
