#include "qhjb/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace qhjb::bounds {

void PurityTarget::validate() const {
    if (!(purity > 0.5 && purity < 1.0))
        throw std::invalid_argument("purity must lie in (1/2, 1)");
    if (!(theta_span >= 0.0))
        throw std::invalid_argument("theta_span must be >= 0");
}

namespace {

void check_purity(double purity) {
    if (!(purity >= 0.5))
        throw std::invalid_argument("purity below 1/2 is not reachable by purification");
    if (!(purity < 1.0))
        throw std::invalid_argument("purity 1 takes infinite time");
}

} // namespace

double tau_wr(double purity, double gamma) {
    check_purity(purity);
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
    const double s = std::sqrt(2.0 * purity - 1.0);
    return s * std::atanh(s) / (8.0 * gamma);
}

double t_jacobs(double purity, double gamma) {
    check_purity(purity);
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
    return -std::log(2.0 - 2.0 * purity) / (8.0 * gamma);
}

PreparationBounds preparation_bounds(const PurityTarget& target,
                                     const SystemParams& params,
                                     const PreparationOptions& opts) {
    target.validate();
    params.validate();
    params.require_omega_dominates();

    PreparationBounds out;
    out.purity = target.purity;
    out.tau_wr = tau_wr(target.purity, params.gamma);
    out.t_jacobs = t_jacobs(target.purity, params.gamma);

    // Worst case: the rotation spans pi, i.e. the hitting/reaching problems
    // started at theta = 0.
    const hitting::Grid grid(opts.hitting_n);
    const hitting::HittingSolution sol = hitting::value_iteration(grid, params, opts.solve);
    if (!sol.converged)
        throw std::runtime_error("value iteration did not converge while composing bounds");
    out.tau_r = sol.value.values[grid.center()];
    out.t_r = horizon::reaching_time(0.0, params, opts.tol_T, opts.horizon).value;

    out.tau_ub = out.tau_wr + out.tau_r;
    out.t_lb = out.t_jacobs + out.t_r;
    out.t_ub = out.tau_wr + out.t_r;
    out.ordering_holds = out.t_lb <= out.t_ub;
    return out;
}

} // namespace qhjb::bounds
