#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace tweezer::io {

struct PlotSeries {
  std::string name;
  std::vector<double> y;
};

/// Static line plot with linear axes, ticks and a legend.
void write_line_plot(const std::filesystem::path& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     std::span<const double> x, const std::vector<PlotSeries>& series);

}  // namespace tweezer::io
