#include "qhjb/horizon.hpp"

#include "qhjb/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qhjb::horizon {

HorizonGrid::HorizonGrid(double T_, const SystemParams& params, double spacing,
                         double cfl_safety) {
    params.validate();
    if (!(T_ >= 0.0)) throw std::invalid_argument("horizon must be >= 0");
    if (!(spacing > 0.0)) throw std::invalid_argument("spacing must be > 0");
    if (!(cfl_safety > 0.0 && cfl_safety <= 1.0))
        throw std::invalid_argument("cfl_safety must be in (0, 1]");

    T = T_;
    h = spacing;
    const double sig_max = 2.0 * std::sqrt(2.0 * params.gamma);
    const double reach = std::numbers::pi + (params.omega + 2.0 * params.gamma) * T +
                         6.0 * sig_max * std::sqrt(T);
    const int c = static_cast<int>(std::ceil(reach / h));
    m = 2 * c + 1;
    L = static_cast<double>(c) * h;
    nodes.resize(m);
    for (int i = 0; i < m; ++i) nodes[i] = static_cast<double>(i - c) * h;

    const double k_bound =
        h * h / (sig_max * sig_max + h * (params.omega + 2.0 * params.gamma));
    if (T == 0.0) {
        steps = 0;
        k = 0.0;
        return;
    }
    steps = static_cast<int>(std::ceil(T / (cfl_safety * k_bound)));
    k = T / static_cast<double>(steps);
    if (k > k_bound)
        throw std::invalid_argument("time step violates the explicit CFL bound");
}

double HorizonSolution::value_at(double theta) const {
    const auto& y = grid.nodes;
    if (theta <= y.front()) return final_values.front();
    if (theta >= y.back()) return final_values.back();
    const int i = std::min(static_cast<int>((theta - y.front()) / grid.h),
                           grid.m - 2);
    const double w = (theta - y[i]) / grid.h;
    return (1.0 - w) * final_values[i] + w * final_values[i + 1];
}

namespace {

double interp(const std::vector<double>& nodes, const std::vector<double>& vals,
              double h, double theta) {
    if (theta <= nodes.front()) return vals.front();
    if (theta >= nodes.back()) return vals.back();
    const int i = std::min(static_cast<int>((theta - nodes.front()) / h),
                           static_cast<int>(nodes.size()) - 2);
    const double w = (theta - nodes[i]) / h;
    return (1.0 - w) * vals[i] + w * vals[i + 1];
}

HorizonSolution solve(double T, const SystemParams& params, const HorizonOptions& opts,
                      double probe_theta, double terminal_sign) {
    params.require_omega_dominates();
    HorizonGrid grid(T, params, opts.spacing, opts.cfl_safety);
    const int m = grid.m;
    const double h = grid.h;
    const double k = grid.k;

    HorizonSolution sol{.grid = grid, .probe_theta = probe_theta};

    std::vector<double> u(m);
    for (int i = 0; i < m; ++i) u[i] = terminal_sign * grid.nodes[i];

    // Per-node coefficients for the two extreme controls. The Hamiltonian is
    // affine in the control, so only the endpoints can attain the sup.
    const int mi = m - 2;
    std::vector<double> bp_pos(mi), bp_neg(mi), bm_pos(mi), bm_neg(mi), s2(mi);
    for (int i = 1; i <= mi; ++i) {
        const double bp = drift(grid.nodes[i], params.omega, params);
        const double bm = drift(grid.nodes[i], -params.omega, params);
        bp_pos[i - 1] = std::max(bp, 0.0);
        bp_neg[i - 1] = std::max(-bp, 0.0);
        bm_pos[i - 1] = std::max(bm, 0.0);
        bm_neg[i - 1] = std::max(-bm, 0.0);
        const double sig = diffusion(grid.nodes[i], params);
        s2[i - 1] = sig * sig;
    }

    const int stride = std::max(1, (grid.steps + 1 + opts.max_kept_levels - 1) /
                                       opts.max_kept_levels);
    auto kept = [&](int level) { return level % stride == 0 || level == grid.steps; };

    sol.probe_series.reserve(grid.steps + 1);
    sol.probe_series.push_back(interp(grid.nodes, u, h, probe_theta));
    sol.kept_times.push_back(0.0);
    sol.kept_levels.push_back(u);
    sol.kept_controls.emplace_back(m, 0.0);
    sol.final_controls.assign(m, 0.0);

    std::vector<double> un(m);
    std::vector<double> ctrl(m, 0.0);
    for (int level = 1; level <= grid.steps; ++level) {
        const bool record = kept(level) || level == grid.steps;
        for (int i = 1; i < m - 1; ++i) {
            const double dfw = (u[i + 1] - u[i]) / h;
            const double dbw = (u[i] - u[i - 1]) / h;
            const double d2 = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h);
            const double diff = 0.5 * s2[i - 1] * d2;
            const double lp = bp_pos[i - 1] * dfw - bp_neg[i - 1] * dbw + diff;
            const double lm = bm_pos[i - 1] * dfw - bm_neg[i - 1] * dbw + diff;
            un[i] = u[i] + k * std::max(lp, lm);
            if (record) ctrl[i] = lp >= lm ? params.omega : -params.omega;
        }
        un[0] = 2.0 * un[1] - un[2];
        un[m - 1] = 2.0 * un[m - 2] - un[m - 3];
        if (record) {
            ctrl[0] = ctrl[1];
            ctrl[m - 1] = ctrl[m - 2];
        }
        u.swap(un);
        if (!std::isfinite(u[m / 2]))
            throw std::runtime_error("horizon sweep produced a non-finite value");
        sol.probe_series.push_back(interp(grid.nodes, u, h, probe_theta));
        if (kept(level)) {
            sol.kept_times.push_back(static_cast<double>(level) * k);
            sol.kept_levels.push_back(u);
            sol.kept_controls.push_back(ctrl);
        }
        if (level == grid.steps) sol.final_controls = ctrl;
    }

    sol.final_values = std::move(u);
    sol.all_plus_omega = grid.steps > 0 &&
                         std::all_of(sol.final_controls.begin(), sol.final_controls.end(),
                                     [&](double c) { return c == params.omega; });
    return sol;
}

} // namespace

HorizonSolution solve_sa(double T, const SystemParams& params,
                         const HorizonOptions& opts, double probe_theta) {
    return solve(T, params, opts, probe_theta, +1.0);
}

HorizonSolution solve_sb(double T, const SystemParams& params,
                         const HorizonOptions& opts, double probe_theta) {
    return solve(T, params, opts, probe_theta, -1.0);
}

double expected_final_angle(double theta0, double T, const SystemParams& params,
                            const HorizonOptions& opts) {
    const HorizonSolution sa = solve_sa(T, params, opts, theta0);
    const HorizonSolution sb = solve_sb(T, params, opts, theta0);
    return std::max(sa.value_at(theta0), sb.value_at(theta0));
}

ReachingTime reaching_time(double theta0, const SystemParams& params, double tol_T,
                           const HorizonOptions& opts) {
    params.require_omega_dominates();
    if (!(tol_T > 0.0)) throw std::invalid_argument("tol_T must be > 0");
    if (std::abs(theta0) >= std::numbers::pi) return {0.0, 0.0, 0.0, 0};

    // One backward solve per bracket: the dynamics are autonomous, so level j
    // of a horizon-T surface is the value for horizon j*k. Evaluating the
    // bisection predicate is then a lookup into the probe series.
    double t_hi = 2.0 * std::numbers::pi / (params.omega - 2.0 * params.gamma);
    int doublings = 0;
    for (;; t_hi *= 2.0, ++doublings) {
        if (doublings > 8)
            throw std::runtime_error("reaching-time bracket not found");
        const HorizonSolution sa = solve_sa(t_hi, params, opts, theta0);
        const HorizonSolution sb = solve_sb(t_hi, params, opts, theta0);
        const double k = sa.grid.k;
        auto crossed = [&](double T) {
            const double pos = T / k;
            const auto j = std::min(static_cast<std::size_t>(pos),
                                    sa.probe_series.size() - 2);
            const double w = pos - static_cast<double>(j);
            const double va = (1.0 - w) * sa.probe_series[j] + w * sa.probe_series[j + 1];
            const double vb = (1.0 - w) * sb.probe_series[j] + w * sb.probe_series[j + 1];
            return std::max(va, vb) > std::numbers::pi;
        };
        if (!crossed(t_hi)) continue;

        double lo = 0.0, hi = t_hi;
        while (hi - lo > tol_T) {
            const double mid = 0.5 * (lo + hi);
            (crossed(mid) ? hi : lo) = mid;
        }
        return {0.5 * (lo + hi), lo, hi, doublings};
    }
}

} // namespace qhjb::horizon
