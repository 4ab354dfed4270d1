#pragma once

#include "qhjb/system_params.hpp"

#include <cstdint>
#include <vector>

namespace qhjb::consistency {

/// Cross-stepper equivalence suite. One Brownian path per seed is generated
/// at the finest step and aggregated to coarser steps, so every resolution
/// sees the same underlying noise.
struct Options {
    double dt = 1e-5;       // pivot step; levels are {2 dt, dt, dt/2}
    double t_end = 0.5;
    int n_seeds = 10;
    std::uint64_t master_seed = 97;
    double v = 10.0;        // constant control applied along the paths
    double angle_gap_tol = 1e-2;
};

struct Report {
    struct Level {
        double dt;
        double max_angle_gap; // max over seeds and time of |theta_polar - theta_bloch|
    };
    std::vector<Level> levels; // coarsest first
    bool pivot_gap_ok = false;       // gap(dt) < angle_gap_tol
    bool halving_decreases = false;  // gap(dt/2) < gap(dt)
    bool monotone_all = false;       // gaps nonincreasing across all levels

    /// Per-step agreement between the Bloch coefficient functions and finite
    /// differences of the density-matrix stepper: err(dt) over a probe set,
    /// for halving steps. First-order agreement means err roughly halves.
    std::vector<double> coeff_dts;
    std::vector<double> coeff_errs;
    double coeff_worst_ratio = 0.0; // min over halvings of err(dt)/err(dt/2)
    bool coeff_first_order = false;

    bool pass = false;
};

Report run_consistency(const Options& opts, const SystemParams& params);

} // namespace qhjb::consistency
