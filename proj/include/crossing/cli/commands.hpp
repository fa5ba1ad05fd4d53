#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "crossing/cli/csv.hpp"
#include "crossing/cli/svg.hpp"

namespace crossing::cli {

/// Figure parameter sets. Figures 1-2 are given through (M, D^2) only.
struct Preset {
    std::string name;
    std::string model_text;  ///< empty for (M, D^2) presets
    double M = 0, Dsq = 0;
    double u = 0, t = 0, alpha = 0.05;
    double c_lo = 0, c_hi = 0;
    int points = 0;
};

/// Throws UsageError for unknown names.
const Preset& find_preset(std::string_view name);

struct FigureOptions {
    std::uint64_t paths = 100000;
    std::uint64_t seed = 20240601;
    unsigned threads = 0;
    std::optional<std::string> sweep;  ///< lo:hi:n over the figure's x axis
};

struct FigureOutput {
    CsvTable table{{}};
    std::vector<std::pair<std::string, Plot>> plots;  ///< file stem, plot
    bool ok = true;
};

FigureOutput make_figure(int id, const FigureOptions& opt);

/// lo:hi:n, n equally spaced points including both ends.
std::vector<double> parse_sweep(std::string_view text);

/// args excludes the program name. Returns 0 on success, 1 when a computation
/// failed, 2 on usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace crossing::cli
