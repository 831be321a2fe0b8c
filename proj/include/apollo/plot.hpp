#pragma once

#include <optional>
#include <span>
#include <string>

namespace apollo {

struct PlotSpec {
    std::string title;
    std::string x_label = "epsilon";
    std::string y_label = "density";
    bool log_x = false;
    std::optional<double> reference;  // horizontal line, e.g. the limit
    std::string reference_label;
};

// Polyline plot with ticks on both axes.
std::string svg_plot(std::span<const double> xs, std::span<const double> ys, PlotSpec const& spec);

}  // namespace apollo
