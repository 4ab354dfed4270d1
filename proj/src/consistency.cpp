#include "qhjb/consistency.hpp"

#include "qhjb/dynamics.hpp"
#include "qhjb/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qhjb::consistency {

namespace {

// Polar and Bloch integration of one shared increment sequence; returns the
// worst unwrapped-angle gap along the path.
double angle_gap(const std::vector<double>& dW, double dt, double v,
                 const SystemParams& params) {
    double theta = 0.0;
    BlochState s{0.0, 1.0};
    double offset = 0.0;
    double prev = 0.0;
    double worst = 0.0;
    for (double w : dW) {
        theta = euler_maruyama_step(theta, v, dt, w, params);
        s = bloch_step(s, v, dt, w, params);
        const double a = std::atan2(s.x, s.z);
        if (a - prev > std::numbers::pi) offset -= 2.0 * std::numbers::pi;
        else if (a - prev < -std::numbers::pi) offset += 2.0 * std::numbers::pi;
        prev = a;
        worst = std::max(worst, std::abs(theta - (a + offset)));
    }
    return worst;
}

// max component difference between the density-matrix step and the Bloch
// coefficient prediction for one (theta, v, dt, dW).
double coeff_err(double theta, double v, double dt, double dW,
                 const SystemParams& params) {
    const DensityMatrix rho = DensityMatrix::pure_polar(theta);
    const DensityMatrix next = sme_density_step(rho, v, dt, dW, params);
    const BlochState s{rho.bloch_x(), rho.bloch_z()};
    const BlochRates b = bloch_drift(s, v, params);
    const BlochRates n = bloch_noise(s, params);
    const double dx = b.x * dt + n.x * dW;
    const double dz = b.z * dt + n.z * dW;
    return std::max(std::abs(next.bloch_x() - rho.bloch_x() - dx),
                    std::abs(next.bloch_z() - rho.bloch_z() - dz));
}

} // namespace

Report run_consistency(const Options& opts, const SystemParams& params) {
    params.validate();
    if (!(opts.dt > 0.0) || !(opts.t_end > 0.0) || opts.n_seeds < 1)
        throw std::invalid_argument("bad consistency options");

    Report rep;

    const double fine_dt = opts.dt / 2.0;
    const auto n_fine = static_cast<std::size_t>(std::llround(opts.t_end / fine_dt));
    const std::vector<double> dts{2.0 * opts.dt, opts.dt, fine_dt};

    std::vector<std::vector<double>> fine_paths(opts.n_seeds);
    const double sq = std::sqrt(fine_dt);
    for (int s = 0; s < opts.n_seeds; ++s) {
        NormalStream normals(trajectory_seed(opts.master_seed, static_cast<std::uint64_t>(s)));
        fine_paths[s].resize(n_fine);
        for (auto& w : fine_paths[s]) w = sq * normals();
    }

    for (double dt : dts) {
        const auto agg = static_cast<std::size_t>(std::llround(dt / fine_dt));
        double worst = 0.0;
        for (int s = 0; s < opts.n_seeds; ++s) {
            std::vector<double> dW(n_fine / agg);
            for (std::size_t j = 0; j < dW.size(); ++j) {
                double acc = 0.0;
                for (std::size_t q = 0; q < agg; ++q) acc += fine_paths[s][j * agg + q];
                dW[j] = acc;
            }
            worst = std::max(worst, angle_gap(dW, dt, opts.v, params));
        }
        rep.levels.push_back({dt, worst});
    }

    rep.pivot_gap_ok = rep.levels[1].max_angle_gap < opts.angle_gap_tol;
    rep.halving_decreases = rep.levels[2].max_angle_gap < rep.levels[1].max_angle_gap;
    rep.monotone_all = true;
    for (std::size_t i = 1; i < rep.levels.size(); ++i)
        rep.monotone_all &= rep.levels[i].max_angle_gap <= rep.levels[i - 1].max_angle_gap;

    // Coefficient agreement over a fixed probe set, dW = sqrt(dt)/2.
    const double probes[] = {0.3, std::numbers::pi / 2.0, 2.0, -1.2, 2.9};
    const double controls[] = {0.0, opts.v / 2.0, opts.v};
    rep.coeff_dts = {4e-5, 2e-5, 1e-5, 5e-6};
    for (double dt : rep.coeff_dts) {
        double worst = 0.0;
        for (double th : probes)
            for (double v : controls)
                worst = std::max(worst, coeff_err(th, v, dt, 0.5 * std::sqrt(dt), params));
        rep.coeff_errs.push_back(worst);
    }
    rep.coeff_worst_ratio = 1e300;
    for (std::size_t i = 1; i < rep.coeff_errs.size(); ++i)
        rep.coeff_worst_ratio =
            std::min(rep.coeff_worst_ratio, rep.coeff_errs[i - 1] / rep.coeff_errs[i]);
    rep.coeff_first_order = rep.coeff_worst_ratio > 1.5 &&
                            rep.coeff_errs.back() < 50.0 * rep.coeff_dts.back();

    rep.pass = rep.pivot_gap_ok && rep.halving_decreases && rep.coeff_first_order;
    return rep;
}

} // namespace qhjb::consistency
