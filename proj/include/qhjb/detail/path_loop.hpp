#pragma once

#include "qhjb/dynamics.hpp"
#include "qhjb/policy.hpp"
#include "qhjb/rng.hpp"
#include "qhjb/simulate.hpp"

#include <cmath>
#include <cstdint>
#include <optional>

namespace qhjb::detail {

/// Single Euler-Maruyama path loop shared by simulate() and the ensemble
/// estimators, so a stored trajectory and the streaming estimate of the same
/// seed are bit-identical. `on_sample(step, t, theta, v)` is invoked for the
/// initial sample and after every accepted step (with the clamped boundary
/// value on absorption).
template <class OnSample>
std::optional<Trajectory::Hit> run_path(double theta0, const Policy& policy,
                                        const SimulateOptions& opts,
                                        std::uint64_t seed, const SystemParams& params,
                                        OnSample&& on_sample) {
    NormalStream normals(trajectory_seed(seed, 0));
    const double sqdt = std::sqrt(opts.dt);
    const auto n_steps = static_cast<std::size_t>(std::ceil(opts.t_max / opts.dt));

    double theta = theta0;
    on_sample(std::size_t{0}, 0.0, theta, policy(theta));

    if (opts.absorb && (theta <= opts.lo || theta >= opts.hi))
        return Trajectory::Hit{0.0, theta <= opts.lo ? opts.lo : opts.hi};

    for (std::size_t k = 0; k < n_steps; ++k) {
        const double v = policy(theta);
        const double dW = sqdt * normals();
        const double next = euler_maruyama_step(theta, v, opts.dt, dW, params);
        const double t_next = static_cast<double>(k + 1) * opts.dt;

        if (opts.absorb && (next <= opts.lo || next >= opts.hi)) {
            const double boundary = next >= opts.hi ? opts.hi : opts.lo;
            const double frac = (boundary - theta) / (next - theta);
            on_sample(k + 1, t_next, boundary, policy(boundary));
            return Trajectory::Hit{static_cast<double>(k) * opts.dt + frac * opts.dt,
                                   boundary};
        }
        theta = next;
        on_sample(k + 1, t_next, theta, policy(theta));
    }
    return std::nullopt;
}

} // namespace qhjb::detail
