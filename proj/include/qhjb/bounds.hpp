#pragma once

#include "qhjb/hitting.hpp"
#include "qhjb/horizon.hpp"
#include "qhjb/system_params.hpp"

namespace qhjb::bounds {

/// Desired purity P = tr(rho^2) in (1/2, 1) and the rotation span to the
/// target state.
struct PurityTarget {
    double purity;
    double theta_span;

    void validate() const;
};

/// Mean time for continuous monitoring (no feedback) to first reach purity P
/// from the maximally mixed state:
///   tau_wr(P) = sqrt(2P-1) * atanh(sqrt(2P-1)) / (8 gamma).
/// Accepts P in [1/2, 1); diverges as P -> 1.
double tau_wr(double purity, double gamma);

/// Deterministic purification time of the locked-to-the-equator feedback
/// scheme: the impurity decays as exp(-8 gamma t) from 1/2, so
///   t_jacobs(P) = -ln(2 - 2P) / (8 gamma).
/// The log argument is 2(1-P); the often-quoted (2P-2) form is negative on
/// the whole valid range, and consumers can see the corrected convention via
/// the sign_correction_applied metadata flag. Accepts P in [1/2, 1).
double t_jacobs(double purity, double gamma);

struct PreparationBounds {
    double purity = 0.0;
    double tau_wr = 0.0;   // purification, mean-hitting sense
    double t_jacobs = 0.0; // purification, expected-trajectory sense
    double tau_r = 0.0;    // rotation, discounted mean hitting value at theta = 0
    double t_r = 0.0;      // rotation, expected-trajectory reaching time at theta = 0
    double tau_ub = 0.0;   // tau_wr + tau_r
    double t_lb = 0.0;     // t_jacobs + t_r
    double t_ub = 0.0;     // tau_wr + t_r
    /// Whether t_lb <= t_ub held. With these purification formulas
    /// t_jacobs > tau_wr everywhere on (1/2, 1), so the composed ordering
    /// fails; it is reported rather than enforced.
    bool ordering_holds = false;
    bool sign_correction_applied = true;
};

struct PreparationOptions {
    int hitting_n = 801;
    hitting::SolveOptions solve;
    double tol_T = 1e-4;
    horizon::HorizonOptions horizon;
};

/// Composite state-preparation bounds: purification times for the requested
/// purity plus the worst-case (orthogonal-state, span pi) rotation times from
/// the two solvers.
PreparationBounds preparation_bounds(const PurityTarget& target,
                                     const SystemParams& params,
                                     const PreparationOptions& opts = {});

} // namespace qhjb::bounds
