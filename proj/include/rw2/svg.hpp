#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

namespace rw2 {

/// Minimal plotter for experiment artifacts; no external dependencies.

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Line chart with auto-scaled axes; log10 x axis optional.
void svg_line_chart(const std::string& path, const std::vector<SvgSeries>& series,
                    const std::string& title, bool log_x = false);

/// Grayscale heatmap of a matrix (row 0 at the bottom), dark = low.
void svg_heatmap(const std::string& path, const Eigen::MatrixXd& values,
                 const std::string& title);

} // namespace rw2
