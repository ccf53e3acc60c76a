// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace hprec {

/// One polyline of a line plot.
struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Writes a self-contained SVG line plot (axes, ticks, legend, one polyline
/// per series).  Purely deterministic; intended for quick inspection of
/// sweep results.
void write_svg_line_plot(const std::string& path, const std::string& title,
                         const std::string& x_label,
                         const std::string& y_label,
                         const std::vector<PlotSeries>& series);

} // namespace hprec
