#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace crossing::cli {

struct Series {
    std::string name;
    std::vector<double> x, y;  ///< NaN in y breaks the line
    std::string color = "#1f4e9a";
    bool markers = false;      ///< points instead of a polyline
};

struct GridLine {
    double at;
    std::string label;
};

struct Plot {
    std::string title, xlabel, ylabel;
    std::vector<Series> series;
    std::vector<GridLine> vlines, hlines;
    int width = 720, height = 480;
};

/// Round tick positions covering [lo, hi].
std::vector<double> nice_ticks(double lo, double hi, int target = 6);

std::string render_svg(const Plot& plot);
void write_svg(const Plot& plot, const std::filesystem::path& path);

}  // namespace crossing::cli
