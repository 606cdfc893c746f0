#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fluxlink::cli {

struct PlotOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    std::optional<std::pair<double, double>> y_range;  // fixed axis instead of the data range
    std::string config_hash;
    int width = 640;
    int height = 420;
};

// Single polyline plot; non-finite points are skipped. Returns an empty
// string when fewer than two finite points remain.
std::string svg_line_plot(const std::vector<double>& x, const std::vector<double>& y, const PlotOptions& opt);

} // namespace fluxlink::cli
