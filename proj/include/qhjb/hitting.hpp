#pragma once

#include "qhjb/system_params.hpp"

#include <cstdint>
#include <vector>

namespace qhjb::hitting {

/// Uniform grid on [-pi, pi] with an odd node count so theta = 0 is a node.
/// Nodes are built symmetrically, theta[i] = -theta[n-1-i] exactly, with the
/// endpoints pinned to +-pi.
struct Grid {
    int n;
    double h;
    std::vector<double> theta;

    explicit Grid(int node_count);

    int center() const { return (n - 1) / 2; }
};

/// Local transition model of the approximating Markov chain at one interior
/// node under one control: jump up/down probabilities and the interpolation
/// interval matching the diffusion's local mean and variance.
struct TransitionStencil {
    double p_up;
    double p_down;
    double dt_local;
};

/// Upwind stencil: with b = drift, s2 = diffusion^2 and Q = s2 + h*|b|,
///   p_up = (s2/2 + h*max(b,0))/Q, p_down = (s2/2 + h*max(-b,0))/Q,
///   dt_local = h^2/Q.
/// Throws when Q == 0 (drift and diffusion both vanish at the node).
TransitionStencil mca_transition(int i, double v, const Grid& grid,
                                 const SystemParams& params);

struct ValueFunction {
    std::vector<double> values;
};

struct PolicyTable {
    std::vector<double> controls;
};

struct SolveOptions {
    double tol = 1e-10;
    std::uint64_t max_iter = 10'000'000;
    /// Residual history is recorded every `history_stride` sweeps (plus the
    /// final sweep).
    std::uint64_t history_stride = 100;
};

struct HittingSolution {
    Grid grid;
    ValueFunction value;
    PolicyTable policy;
    std::uint64_t iterations = 0;
    double residual = 0.0;
    bool converged = false;
    std::vector<std::pair<std::uint64_t, double>> residual_history;
    /// Interior nodes where both controls gave bit-equal costs; the tie was
    /// broken toward +omega.
    std::vector<int> tie_nodes;
};

/// One Jacobi sweep of the dynamic-programming operator
///   V_i <- min_v [ c(dt_i) + exp(-lambda dt_i) (p_up V_{i+1} + p_down V_{i-1}) ]
/// over v in {-omega, +omega}, c(dt) = (1 - exp(-lambda dt))/lambda.
/// Boundary values stay at zero. Returns the updated value and the argmin
/// controls (ties toward +omega).
std::pair<ValueFunction, PolicyTable> bellman_update(const ValueFunction& v,
                                                     const Grid& grid,
                                                     const SystemParams& params);

/// Value iteration from V = 0 until the sup-norm of successive sweeps drops
/// below opts.tol. Restricting controls to the endpoints {-omega, +omega} is
/// exact: the Hamiltonian is affine in the control, so the extremum over
/// [-omega, omega] is attained at an endpoint. Requires omega > 2*gamma so
/// the drift term keeps every interior stencil well defined.
HittingSolution value_iteration(const Grid& grid, const SystemParams& params,
                                const SolveOptions& opts = {});

/// Sup-norm consistency diagnostic: max over interior nodes of
///   | -1 + lambda V_i - [ b D_upwind V + (1/2) s2 D2 V ]_i |
/// evaluated at the solution's controls. Scales down with h.
double residual_diagnostic(const HittingSolution& sol, const SystemParams& params);

} // namespace qhjb::hitting
