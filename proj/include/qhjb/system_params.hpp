#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qhjb {

/// Physical and control constants of the monitored-qubit rotation problem.
///
/// gamma  measurement strength (1/time), > 0
/// omega  control bound (rad/time), > 0; admissible controls live in [-omega, omega]
/// lambda discount factor (1/time), >= 0
/// target_angle  absorbing target |theta| = target_angle, default pi
struct SystemParams {
    double gamma = 1.0;
    double omega = 10.0;
    double lambda = 0.1;
    double target_angle = std::numbers::pi;

    /// True when omega > 2*gamma. Several operations (value iteration with a
    /// two-point control set, the horizon reaching-time search) rely on the
    /// controlled drift staying bounded away from zero, which this guarantees.
    bool omega_dominates() const { return omega > 2.0 * gamma; }

    void validate() const {
        if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
        if (!(omega > 0.0)) throw std::invalid_argument("omega must be > 0");
        if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
        if (!(target_angle > 0.0)) throw std::invalid_argument("target_angle must be > 0");
    }

    void require_omega_dominates() const {
        if (!omega_dominates())
            throw std::invalid_argument("omega must exceed 2*gamma for this operation");
    }

    void require_control(double v) const {
        if (std::abs(v) > omega * (1.0 + 1e-15))
            throw std::invalid_argument("control outside [-omega, omega]");
    }
};

} // namespace qhjb
