#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace deconv::svg {

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

/// Self-contained SVG line plot: axes, tick labels, legend, one polyline per
/// series. No external assets.
void write_line_plot(const std::filesystem::path& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<Series>& series);

} // namespace deconv::svg
