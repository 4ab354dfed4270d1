#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace qhjb {

/// Allowed drift of x^2 + z^2 away from 1 along renormalized Bloch paths.
inline constexpr double kTolPurity = 1e-6;

/// Angle on the x-z great circle of the Bloch sphere, measured from +z.
/// wrapped = true means theta lives in [-pi, pi] (hitting problems);
/// wrapped = false means theta is unwrapped over the whole real line
/// (horizon problems, expected-trajectory statistics).
struct PolarState {
    double theta = 0.0;
    bool wrapped = true;
};

/// Bloch components in the x-z plane; pure states sit on the unit circle.
struct BlochState {
    double x = 0.0;
    double z = 1.0;

    double radius2() const { return x * x + z * z; }
};

/// 2x2 density matrix, row-major. Valid states are Hermitian, unit-trace
/// and positive semidefinite.
struct DensityMatrix {
    std::complex<double> r00{1.0, 0.0};
    std::complex<double> r01{0.0, 0.0};
    std::complex<double> r10{0.0, 0.0};
    std::complex<double> r11{0.0, 0.0};

    double bloch_x() const { return 2.0 * r01.real(); }
    double bloch_y() const { return -2.0 * r01.imag(); }
    double bloch_z() const { return r00.real() - r11.real(); }
    double trace_re() const { return r00.real() + r11.real(); }
    double purity() const;

    /// Throws std::invalid_argument when Hermiticity (1e-12), unit trace
    /// (1e-12) or positivity (eigenvalues >= -1e-10) fails.
    void validate() const;

    static DensityMatrix pure_polar(double theta);
    static DensityMatrix maximally_mixed();
};

/// One sample path of the polar angle, uniformly spaced in time.
/// `hit` is present when the path was absorbed; its time is the linearly
/// interpolated boundary crossing between the bracketing samples, which the
/// recorded (clamped) states cannot reconstruct on their own.
struct Trajectory {
    std::vector<double> times;
    std::vector<double> thetas;
    std::vector<double> controls;
    std::uint64_t seed = 0;
    double dt = 0.0;
    bool wrapped = true;

    struct Hit {
        double time;
        double boundary;
    };
    std::optional<Hit> hit;

    std::size_t size() const { return times.size(); }
};

} // namespace qhjb
