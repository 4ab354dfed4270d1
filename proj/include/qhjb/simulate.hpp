#pragma once

#include "qhjb/policy.hpp"
#include "qhjb/states.hpp"
#include "qhjb/system_params.hpp"

#include <cstdint>
#include <numbers>
#include <optional>

namespace qhjb {

struct SimulateOptions {
    double dt = 1e-4;
    double t_max = 10.0;
    bool absorb = true;
    /// Absorbing interval; the path stops when it first leaves (lo, hi).
    double lo = -std::numbers::pi;
    double hi = std::numbers::pi;
};

/// Integrate the polar SDE from theta0 under `policy` with the per-seed
/// normal stream. Identical (seed, dt, policy) inputs give bit-identical
/// trajectories. With absorb, the recorded path ends clamped at the boundary
/// and Trajectory::hit carries the interpolated crossing.
Trajectory simulate(double theta0, const Policy& policy, const SimulateOptions& opts,
                    std::uint64_t seed, const SystemParams& params);

/// Interpolated first-passage time of an absorbing trajectory; empty when the
/// path was never absorbed within t_max.
std::optional<double> hitting_time(const Trajectory& traj);

/// Discounted time functional int_0^tau exp(-lambda s) ds. Censored paths
/// (absent tau) contribute the infinite-horizon limit 1/lambda.
double discounted_cost(std::optional<double> tau, double lambda);

} // namespace qhjb
