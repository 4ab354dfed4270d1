#include "qhjb/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace qhjb {

namespace {

using cd = std::complex<double>;

struct Mat2 {
    cd a00, a01, a10, a11;
};

Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.a00 * b.a00 + a.a01 * b.a10, a.a00 * b.a01 + a.a01 * b.a11,
            a.a10 * b.a00 + a.a11 * b.a10, a.a10 * b.a01 + a.a11 * b.a11};
}

Mat2 operator+(const Mat2& a, const Mat2& b) {
    return {a.a00 + b.a00, a.a01 + b.a01, a.a10 + b.a10, a.a11 + b.a11};
}

Mat2 operator-(const Mat2& a, const Mat2& b) {
    return {a.a00 - b.a00, a.a01 - b.a01, a.a10 - b.a10, a.a11 - b.a11};
}

Mat2 operator*(cd s, const Mat2& a) { return {s * a.a00, s * a.a01, s * a.a10, s * a.a11}; }

cd trace(const Mat2& a) { return a.a00 + a.a11; }

const Mat2 kSigmaY{cd(0, 0), cd(0, -1), cd(0, 1), cd(0, 0)};
const Mat2 kSigmaZ{cd(1, 0), cd(0, 0), cd(0, 0), cd(-1, 0)};

Mat2 to_mat(const DensityMatrix& r) { return {r.r00, r.r01, r.r10, r.r11}; }

DensityMatrix from_mat(const Mat2& m) { return {m.a00, m.a01, m.a10, m.a11}; }

} // namespace

double DensityMatrix::purity() const {
    const Mat2 m = to_mat(*this);
    return trace(m * m).real();
}

void DensityMatrix::validate() const {
    const double herm = std::abs(r01 - std::conj(r10)) +
                        std::abs(r00.imag()) + std::abs(r11.imag());
    if (herm > 1e-12) throw std::invalid_argument("density matrix not Hermitian");
    if (std::abs(trace_re() - 1.0) > 1e-12)
        throw std::invalid_argument("density matrix trace != 1");
    // Eigenvalues of a Hermitian 2x2 with trace t: (t +- sqrt(t^2 - 4 det))/2.
    const double t = trace_re();
    const double det = (r00 * r11 - r01 * r10).real();
    const double disc = std::sqrt(std::max(0.0, t * t - 4.0 * det));
    if ((t - disc) / 2.0 < -1e-10)
        throw std::invalid_argument("density matrix not positive semidefinite");
}

DensityMatrix DensityMatrix::pure_polar(double theta) {
    // |psi> = (cos(theta/2), sin(theta/2)) gives x = sin(theta), z = cos(theta).
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return {cd(c * c, 0), cd(c * s, 0), cd(c * s, 0), cd(s * s, 0)};
}

DensityMatrix DensityMatrix::maximally_mixed() {
    return {cd(0.5, 0), cd(0, 0), cd(0, 0), cd(0.5, 0)};
}

BlochState bloch_step(const BlochState& s, double v, double dt, double dW,
                      const SystemParams& p) {
    p.require_control(v);
    if (std::abs(s.radius2() - 1.0) > kTolPurity)
        throw std::invalid_argument("Bloch state off the unit circle beyond tolerance");
    const BlochRates b = bloch_drift(s, v, p);
    const BlochRates n = bloch_noise(s, p);
    double x = s.x + b.x * dt + n.x * dW;
    double z = s.z + b.z * dt + n.z * dW;
    const double r = std::sqrt(x * x + z * z);
    if (r > 0.0) {
        x /= r;
        z /= r;
    }
    return {x, z};
}

DensityMatrix sme_density_step(const DensityMatrix& rho, double v, double dt,
                               double dW, const SystemParams& p) {
    p.require_control(v);
    rho.validate();
    const Mat2 r = to_mat(rho);

    const Mat2 commutator = kSigmaY * r - r * kSigmaY;
    // sigma_z is Hermitian and squares to the identity, so
    // D[sigma_z] r = sigma_z r sigma_z - r.
    const Mat2 dissipator = kSigmaZ * r * kSigmaZ - r;
    const cd mz = trace(kSigmaZ * r);
    const Mat2 innovation = kSigmaZ * r + r * kSigmaZ - (2.0 * mz) * r;

    const cd i(0.0, 1.0);
    Mat2 next = r + (-i * (v / 2.0) * dt) * commutator +
                cd(2.0 * p.gamma * dt, 0.0) * dissipator +
                cd(std::sqrt(2.0 * p.gamma) * dW, 0.0) * innovation;

    const double tr = trace(next).real();
    next = cd(1.0 / tr, 0.0) * next;
    return from_mat(next);
}

} // namespace qhjb
