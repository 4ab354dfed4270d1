#pragma once

#include "qhjb/hitting.hpp"
#include "qhjb/policy.hpp"
#include "qhjb/system_params.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qhjb::mc {

struct EnsembleConfig {
    int n_traj = 5000;
    double dt = 1e-4;
    /// Cutoff time; <= 0 derives 50/lambda for discounted-hitting runs.
    double t_max = 0.0;
    std::uint64_t master_seed = 1;
    /// 0 resolves to QHJB_THREADS or the hardware count.
    int threads = 0;
};

struct EnsembleStats {
    double mean = 0.0;
    double std_error = 0.0;
    int n_censored = 0;
    int n_traj = 0;
    bool all_censored = false;
};

/// Ensemble mean of the discounted hitting cost from theta0 under `policy`,
/// absorbing at the first exit from (lo, hi). Censored paths contribute the
/// infinite-horizon value 1/lambda. Requires lambda > 0. Output is
/// bit-reproducible for a fixed (config, params) under any thread count.
EnsembleStats estimate_discounted_hitting(double theta0, const Policy& policy,
                                          const EnsembleConfig& cfg,
                                          const SystemParams& params,
                                          double lo, double hi);

/// Same with the default target set |theta| = pi.
EnsembleStats estimate_discounted_hitting(double theta0, const Policy& policy,
                                          const EnsembleConfig& cfg,
                                          const SystemParams& params);

/// Undiscounted mean hitting time over the absorbed paths only; censored
/// paths are excluded from the average and counted. Needs cfg.t_max > 0.
EnsembleStats estimate_mean_hitting(double theta0, const Policy& policy,
                                    const EnsembleConfig& cfg,
                                    const SystemParams& params);

struct ExpectedTrajectoryCurve {
    std::vector<double> times;
    std::vector<double> mean;
    std::vector<double> std_error;
    /// First interpolated time with |mean| = pi, when reached within t_max.
    std::optional<double> crossing;
};

/// Pathwise mean of the unwrapped angle at sample times (every
/// `sample_stride`-th step) over cfg.t_max.
ExpectedTrajectoryCurve estimate_expected_trajectory(double theta0, const Policy& policy,
                                                     const EnsembleConfig& cfg,
                                                     const SystemParams& params,
                                                     int sample_stride = 1);

struct OmegaSweepRow {
    double omega = 0.0;
    EnsembleStats stats;
    double pde_value = 0.0;
    double disc_hamiltonian = 0.0;
    double hamiltonian = 0.0;
    /// Non-empty when this row failed; other rows are unaffected.
    std::string error;
};

struct OmegaSweepOptions {
    int pde_n = 801;
    hitting::SolveOptions solve;
};

/// One row per control bound: Monte Carlo discounted hitting estimate under
/// the value-iteration policy, the PDE value at theta0, and the two
/// Hamiltonian-evolution reference lines pi/omega and
/// (1 - exp(-lambda pi / omega))/lambda.
std::vector<OmegaSweepRow> omega_sweep(const std::vector<double>& omegas, double theta0,
                                       const EnsembleConfig& cfg,
                                       const SystemParams& params,
                                       const OmegaSweepOptions& opts = {});

struct TargetExperiment {
    double start = 0.0;
    double target = 0.0;
    EnsembleStats stats;
};

/// Discounted hitting estimate from `start` to the state at angle `target`
/// (absorbing at either circle representative of the target), under the
/// bang-bang law that pushes toward the nearer representative.
TargetExperiment hitting_to_target(double start, double target,
                                   const EnsembleConfig& cfg,
                                   const SystemParams& params);

struct AlternateTargetsComparison {
    TargetExperiment x_to_minus_x; // pi/2 -> -pi/2
    TargetExperiment z_to_minus_z; // 0 -> pi
};

AlternateTargetsComparison alternate_targets_experiment(const EnsembleConfig& cfg,
                                                        const SystemParams& params);

/// Thread count after applying the config, QHJB_THREADS and hardware caps.
int resolve_threads(int requested);

} // namespace qhjb::mc
