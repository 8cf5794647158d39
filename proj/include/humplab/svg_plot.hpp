#pragma once

#include <string>
#include <vector>

namespace humplab {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Deterministic line plot: fixed 960 x 600 canvas, axes spanning the
/// data min/max padded by 5%, tick labels, one polyline per series and
/// a legend. Identical inputs produce identical bytes.
void write_svg_plot(const std::vector<PlotSeries>& series,
                    const std::string& x_label, const std::string& y_label,
                    const std::string& path);

} // namespace humplab
