#pragma once

#include <string>
#include <vector>

namespace persbar {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> err;  // optional symmetric error bars
    bool line = false;        // polyline instead of markers
};

struct Plot {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    std::vector<PlotSeries> series;
};

/// Self-contained SVG with log-log axes and decade gridlines. Points with a
/// non-positive coordinate are dropped.
std::string render_loglog_svg(const Plot& plot);

}  // namespace persbar
