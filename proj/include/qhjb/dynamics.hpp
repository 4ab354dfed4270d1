#pragma once

#include "qhjb/states.hpp"
#include "qhjb/system_params.hpp"

#include <cmath>

namespace qhjb {

/// Controlled drift of the polar angle: b(theta, v) = v - 2*gamma*sin(2*theta).
/// Rejects controls outside [-omega, omega].
inline double drift(double theta, double v, const SystemParams& p) {
    p.require_control(v);
    return v - 2.0 * p.gamma * std::sin(2.0 * theta);
}

/// Noise amplitude of the polar angle: sigma(theta) = 2*sqrt(2*gamma)*sin(theta).
/// Vanishes exactly at theta in {0, +-pi}; only sigma^2 enters the generator,
/// so the sign convention here matches sin.
inline double diffusion(double theta, const SystemParams& p) {
    return 2.0 * std::sqrt(2.0 * p.gamma) * std::sin(theta);
}

/// One Euler-Maruyama step of the polar SDE
///   d theta = b(theta, v) dt - sigma(theta) dW.
/// The minus sign on the noise term keeps polar paths sample-path consistent
/// with the Bloch and density-matrix steppers driven by the same increments
/// (Bloch kicks toward +z correspond to the angle shrinking).
inline double euler_maruyama_step(double theta, double v, double dt, double dW,
                                  const SystemParams& p) {
    return theta + drift(theta, v, p) * dt - diffusion(theta, p) * dW;
}

/// Deterministic part of the pure-state Bloch SDE:
///   dx = (v*z - 4*gamma*x) dt,  dz = -v*x dt.
struct BlochRates {
    double x;
    double z;
};

inline BlochRates bloch_drift(const BlochState& s, double v, const SystemParams& p) {
    return {v * s.z - 4.0 * p.gamma * s.x, -v * s.x};
}

/// Noise coefficients of the pure-state Bloch SDE (per unit dW):
///   dx <- -2*sqrt(2*gamma)*x*z,  dz <- 2*sqrt(2*gamma)*(1 - z^2).
inline BlochRates bloch_noise(const BlochState& s, const SystemParams& p) {
    const double c = 2.0 * std::sqrt(2.0 * p.gamma);
    return {-c * s.x * s.z, c * (1.0 - s.z * s.z)};
}

/// Euler step of the Bloch components followed by renormalization to the unit
/// circle. Rejects inputs whose purity defect exceeds kTolPurity.
BlochState bloch_step(const BlochState& s, double v, double dt, double dW,
                      const SystemParams& p);

/// Euler step of the conditional density matrix
///   d rho = -i (v/2) [sigma_y, rho] dt + 2*gamma D[sigma_z] rho dt
///           + sqrt(2*gamma) H[sigma_z] rho dW,
/// with D[A]r = A r A' - (A'A r + r A'A)/2 and
/// H[A]r = A r + r A' - tr[(A + A') r] r. The trace is renormalized to one
/// after the step. Input invariants are checked.
DensityMatrix sme_density_step(const DensityMatrix& rho, double v, double dt,
                               double dW, const SystemParams& p);

} // namespace qhjb
