#pragma once

#include <string>
#include <vector>

#include "qbm/params.hpp"

namespace qbm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

struct Grid {
    double t_min = 1e-3;
    double t_max = 10.0;
    int n_points = 500;
    bool log_spacing = false;

    std::vector<double> make() const;
};

struct RunConfig {
    ModelParams model;
    Grid grid;
    std::string output_path;
    std::string preset;  // optional figure id

    void validate() const;
};

// Subcommand dispatch: correlation, susceptibility, diffusion, classical,
// simulate, preset, plot-script (plus the hidden debug-phi). Returns 0 on
// success, 2 on configuration errors, 3 on numeric non-convergence.
int run(int argc, const char* const* argv);

// Emits a gnuplot script reproducing a preset figure layout from existing CSV
// files. Pure text; no rendering dependency.
std::string emit_plot_script(const std::vector<std::string>& csv_paths, const std::string& style);

}  // namespace qbm::cli
