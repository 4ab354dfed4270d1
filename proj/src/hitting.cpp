#include "qhjb/hitting.hpp"

#include "qhjb/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qhjb::hitting {

Grid::Grid(int node_count) : n(node_count) {
    if (n < 5 || n % 2 == 0)
        throw std::invalid_argument("grid needs an odd node count >= 5");
    const int c = center();
    h = std::numbers::pi / static_cast<double>(c);
    theta.resize(n);
    for (int i = 0; i < n; ++i) theta[i] = static_cast<double>(i - c) * h;
    theta.front() = -std::numbers::pi;
    theta.back() = std::numbers::pi;
}

TransitionStencil mca_transition(int i, double v, const Grid& grid,
                                 const SystemParams& params) {
    if (i <= 0 || i >= grid.n - 1)
        throw std::invalid_argument("stencil defined on interior nodes only");
    const double b = drift(grid.theta[i], v, params);
    const double sig = diffusion(grid.theta[i], params);
    const double s2 = sig * sig;
    const double q = s2 + grid.h * std::abs(b);
    if (q == 0.0)
        throw std::invalid_argument("degenerate node: drift and diffusion both vanish");
    return {(s2 / 2.0 + grid.h * std::max(b, 0.0)) / q,
            (s2 / 2.0 + grid.h * std::max(-b, 0.0)) / q, grid.h * grid.h / q};
}

namespace {

// Fused per-node coefficients for one control: V' = cost + a_up V_up + a_dn V_dn.
struct FusedStencil {
    std::vector<double> cost, a_up, a_dn;
};

FusedStencil fuse(const Grid& grid, double v, const SystemParams& params) {
    FusedStencil f;
    const int m = grid.n - 2;
    f.cost.resize(m);
    f.a_up.resize(m);
    f.a_dn.resize(m);
    for (int i = 1; i <= m; ++i) {
        const TransitionStencil s = mca_transition(i, v, grid, params);
        const double disc = std::exp(-params.lambda * s.dt_local);
        f.cost[i - 1] = params.lambda > 0.0
                            ? -std::expm1(-params.lambda * s.dt_local) / params.lambda
                            : s.dt_local;
        f.a_up[i - 1] = disc * s.p_up;
        f.a_dn[i - 1] = disc * s.p_down;
    }
    return f;
}

} // namespace

std::pair<ValueFunction, PolicyTable> bellman_update(const ValueFunction& v,
                                                     const Grid& grid,
                                                     const SystemParams& params) {
    if (static_cast<int>(v.values.size()) != grid.n)
        throw std::invalid_argument("value/grid size mismatch");
    const FusedStencil plus = fuse(grid, params.omega, params);
    const FusedStencil minus = fuse(grid, -params.omega, params);

    ValueFunction out;
    out.values.assign(grid.n, 0.0);
    PolicyTable pol;
    pol.controls.assign(grid.n, 0.0);
    for (int i = 1; i < grid.n - 1; ++i) {
        // The two products are summed before the cost so that mirrored nodes
        // accumulate in the same order and the theta <-> -theta symmetry is
        // preserved bit-exactly.
        const double cp = plus.cost[i - 1] + (plus.a_up[i - 1] * v.values[i + 1] +
                                              plus.a_dn[i - 1] * v.values[i - 1]);
        const double cm = minus.cost[i - 1] + (minus.a_up[i - 1] * v.values[i + 1] +
                                               minus.a_dn[i - 1] * v.values[i - 1]);
        out.values[i] = std::min(cp, cm);
        pol.controls[i] = cm < cp ? -params.omega : params.omega;
    }
    return {std::move(out), std::move(pol)};
}

HittingSolution value_iteration(const Grid& grid, const SystemParams& params,
                                const SolveOptions& opts) {
    params.validate();
    params.require_omega_dominates();

    const FusedStencil plus = fuse(grid, params.omega, params);
    const FusedStencil minus = fuse(grid, -params.omega, params);

    HittingSolution sol{.grid = grid};
    std::vector<double> v(grid.n, 0.0);
    std::vector<double> vn(grid.n, 0.0);

    double sup = 0.0;
    for (std::uint64_t iter = 1; iter <= opts.max_iter; ++iter) {
        sup = 0.0;
        for (int i = 1; i < grid.n - 1; ++i) {
            const double up = v[i + 1];
            const double dn = v[i - 1];
            // Product-first grouping keeps the sweep bit-symmetric in theta.
            const double cp =
                plus.cost[i - 1] + (plus.a_up[i - 1] * up + plus.a_dn[i - 1] * dn);
            const double cm =
                minus.cost[i - 1] + (minus.a_up[i - 1] * up + minus.a_dn[i - 1] * dn);
            const double nv = std::min(cp, cm);
            sup = std::max(sup, std::abs(nv - v[i]));
            vn[i] = nv;
        }
        v.swap(vn);
        sol.iterations = iter;
        if (iter % opts.history_stride == 0 || sup < opts.tol)
            sol.residual_history.emplace_back(iter, sup);
        if (sup < opts.tol) {
            sol.converged = true;
            break;
        }
    }
    sol.residual = sup;

    // Argmin pass on the converged values; equal costs record a tie and
    // resolve to +omega.
    sol.value.values = v;
    sol.policy.controls.assign(grid.n, 0.0);
    for (int i = 1; i < grid.n - 1; ++i) {
        const double up = v[i + 1];
        const double dn = v[i - 1];
        const double cp =
            plus.cost[i - 1] + (plus.a_up[i - 1] * up + plus.a_dn[i - 1] * dn);
        const double cm =
            minus.cost[i - 1] + (minus.a_up[i - 1] * up + minus.a_dn[i - 1] * dn);
        sol.policy.controls[i] = cm < cp ? -params.omega : params.omega;
        if (cm == cp) sol.tie_nodes.push_back(i);
    }
    return sol;
}

double residual_diagnostic(const HittingSolution& sol, const SystemParams& params) {
    const Grid& g = sol.grid;
    const std::vector<double>& v = sol.value.values;
    double worst = 0.0;
    for (int i = 1; i < g.n - 1; ++i) {
        const double b = drift(g.theta[i], sol.policy.controls[i], params);
        const double sig = diffusion(g.theta[i], params);
        const double d_up = (v[i + 1] - v[i]) / g.h;
        const double d_dn = (v[i] - v[i - 1]) / g.h;
        const double d1 = b > 0.0 ? d_up : (b < 0.0 ? d_dn : 0.0);
        const double d2 = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (g.h * g.h);
        const double r = -1.0 + params.lambda * v[i] - (b * d1 + 0.5 * sig * sig * d2);
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

} // namespace qhjb::hitting
