#pragma once

#include "qhjb/system_params.hpp"

#include <cstdint>
#include <vector>

namespace qhjb::horizon {

/// Truncated spatial domain and explicit time step for the backward sweep.
/// The half-width covers the drift reach plus six diffusion standard
/// deviations beyond [-pi, pi]; the step satisfies the explicit-scheme
/// monotonicity (CFL) bound k <= h^2 / (s_max^2 + h (omega + 2 gamma)).
struct HorizonGrid {
    double L;
    int m;
    double h;
    double T;
    double k;
    int steps;
    std::vector<double> nodes;

    /// Throws when `spacing` and `cfl_safety` produce an unstable step.
    HorizonGrid(double T, const SystemParams& params, double spacing,
                double cfl_safety = 0.9);

    int center() const { return (m - 1) / 2; }
};

struct HorizonOptions {
    double spacing = 0.02;
    double cfl_safety = 0.9;
    /// At most this many time levels are retained in the dumped surface.
    int max_kept_levels = 512;
};

/// Value surface of one Mayer problem, stored by elapsed horizon:
/// level j holds sup_policy E[terminal(theta(s_j))] as a function of the
/// start angle, s_j = j*k. Level 0 is the terminal datum itself.
struct HorizonSolution {
    HorizonGrid grid;
    /// Decimated value surface; kept_levels[j] pairs with kept_times[j].
    /// kept_controls rows hold the argmax controls of the step that produced
    /// the level (zero for the terminal level, which involves no decision).
    std::vector<double> kept_times;
    std::vector<std::vector<double>> kept_levels;
    std::vector<std::vector<double>> kept_controls;
    /// Final level (elapsed horizon T) at full spatial resolution.
    std::vector<double> final_values;
    /// argmax controls of the final backward step.
    std::vector<double> final_controls;
    /// Value at the probe angle for every time level, full time resolution.
    double probe_theta = 0.0;
    std::vector<double> probe_series;
    /// True when every final-level control equals +omega (diagnostic for the
    /// ascending problem; not assumed anywhere).
    bool all_plus_omega = false;

    /// Linear interpolation of the final level at `theta`.
    double value_at(double theta) const;
};

/// Ascending Mayer value S^a: terminal datum phi(y) = y, dynamic programming
/// by an explicit upwind sweep with linear extrapolation at the lateral
/// boundaries. Requires omega > 2*gamma.
HorizonSolution solve_sa(double T, const SystemParams& params,
                         const HorizonOptions& opts = {}, double probe_theta = 0.0);

/// Descending Mayer value S^b: terminal datum phi(y) = -y.
HorizonSolution solve_sb(double T, const SystemParams& params,
                         const HorizonOptions& opts = {}, double probe_theta = 0.0);

/// max(S^a, S^b) at theta0 for horizon T = sup over policies of |E[theta(T)]|.
double expected_final_angle(double theta0, double T, const SystemParams& params,
                            const HorizonOptions& opts = {});

struct ReachingTime {
    double value = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    int doublings = 0;
};

/// Expected-trajectory reaching time: inf{ T : max(S^a, S^b)(theta0) > pi },
/// located by bracketing plus bisection on T to tolerance tol_T. The drift
/// under the saturated control exceeds omega - 2*gamma > 0, so the crossing
/// function is monotone in T and the bisection is valid.
ReachingTime reaching_time(double theta0, const SystemParams& params,
                           double tol_T = 1e-4, const HorizonOptions& opts = {});

} // namespace qhjb::horizon
