#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace pqt::svg {

struct Series {
    std::string label;
    std::vector<double> x, y;
    std::string color = "#1f6feb";
};

struct PlotSpec {
    std::string title, x_label, y_label;
    bool log_y = false;
    /// Vertical reference markers (e.g. the deviation onset t*).
    std::vector<double> x_markers;
};

/// Deterministic, self-contained line plot. Throws on empty data or,
/// with log_y, on nonpositive values.
std::string render_line_plot(const PlotSpec& spec, const std::vector<Series>& series);

/// Bar chart over categorical / binned values.
std::string render_bar_chart(const PlotSpec& spec, const std::vector<std::string>& labels,
                             const std::vector<double>& values);

void write(const std::filesystem::path& path, const std::string& content);

}  // namespace pqt::svg
