#include "qhjb/simulate.hpp"

#include "qhjb/detail/path_loop.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qhjb {

Trajectory simulate(double theta0, const Policy& policy, const SimulateOptions& opts,
                    std::uint64_t seed, const SystemParams& params) {
    if (!(opts.dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    if (!(opts.t_max > 0.0)) throw std::invalid_argument("t_max must be > 0");

    Trajectory traj;
    traj.seed = seed;
    traj.dt = opts.dt;
    traj.wrapped = opts.absorb;

    const auto n_steps = static_cast<std::size_t>(std::ceil(opts.t_max / opts.dt));
    traj.times.reserve(n_steps + 1);
    traj.thetas.reserve(n_steps + 1);
    traj.controls.reserve(n_steps + 1);

    traj.hit = detail::run_path(theta0, policy, opts, seed, params,
                                [&](std::size_t, double t, double theta, double v) {
                                    traj.times.push_back(t);
                                    traj.thetas.push_back(theta);
                                    traj.controls.push_back(v);
                                });
    return traj;
}

std::optional<double> hitting_time(const Trajectory& traj) {
    if (!traj.hit) return std::nullopt;
    return traj.hit->time;
}

double discounted_cost(std::optional<double> tau, double lambda) {
    if (lambda == 0.0) {
        if (!tau) return std::numeric_limits<double>::infinity();
        return *tau;
    }
    if (!tau) return 1.0 / lambda;
    return -std::expm1(-lambda * *tau) / lambda;
}

} // namespace qhjb
