#pragma once

#include <string>
#include <utility>
#include <vector>

namespace lambda_engine {

struct SvgSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;  // NaN points are skipped
};

struct SvgPlotSpec {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    int width = 760;
    int height = 500;
};

// Deterministic SVG 1.1 line plot: fixed float formatting, stable element
// order, no external assets. Identical inputs render identical bytes.
std::string render_svg_plot(const std::vector<SvgSeries>& series,
                            const SvgPlotSpec& spec);

}  // namespace lambda_engine
