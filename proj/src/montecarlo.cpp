#include "qhjb/montecarlo.hpp"

#include "qhjb/detail/path_loop.hpp"
#include "qhjb/simulate.hpp"
#include "qhjb/summation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace qhjb::mc {

namespace {

// Paths are processed in fixed chunks of 64 so that partial results have a
// thread-count-independent layout; reductions then run over chunk index.
constexpr int kChunk = 64;

void for_each_chunk(int n, int threads,
                    const std::function<void(int chunk_idx, int begin, int end)>& body) {
    const int n_chunks = (n + kChunk - 1) / kChunk;
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            const int c = next.fetch_add(1);
            if (c >= n_chunks) return;
            body(c, c * kChunk, std::min(n, (c + 1) * kChunk));
        }
    };
    if (threads <= 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

double effective_t_max(const EnsembleConfig& cfg, const SystemParams& params) {
    if (cfg.t_max > 0.0) return cfg.t_max;
    if (params.lambda > 0.0) return 50.0 / params.lambda;
    throw std::invalid_argument("t_max must be given when lambda == 0");
}

void check_config(const EnsembleConfig& cfg) {
    if (cfg.n_traj < 1) throw std::invalid_argument("n_traj must be >= 1");
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("dt must be > 0");
}

} // namespace

int resolve_threads(int requested) {
    if (requested > 0) return std::min(requested, 64);
    if (const char* env = std::getenv("QHJB_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return std::min(v, 64);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(std::min(hw, 64u)) : 1;
}

EnsembleStats estimate_discounted_hitting(double theta0, const Policy& policy,
                                          const EnsembleConfig& cfg,
                                          const SystemParams& params,
                                          double lo, double hi) {
    params.validate();
    check_config(cfg);
    if (!(params.lambda > 0.0))
        throw std::invalid_argument("discounted-hitting estimate requires lambda > 0");

    SimulateOptions opts;
    opts.dt = cfg.dt;
    opts.t_max = effective_t_max(cfg, params);
    opts.absorb = true;
    opts.lo = lo;
    opts.hi = hi;

    std::vector<double> cost(cfg.n_traj);
    std::vector<std::uint8_t> censored(cfg.n_traj, 0);

    for_each_chunk(cfg.n_traj, resolve_threads(cfg.threads),
                   [&](int, int begin, int end) {
                       for (int k = begin; k < end; ++k) {
                           const auto hit = detail::run_path(
                               theta0, policy, opts,
                               trajectory_seed(cfg.master_seed, static_cast<std::uint64_t>(k)),
                               params, [](std::size_t, double, double, double) {});
                           std::optional<double> tau;
                           if (hit) tau = hit->time;
                           else censored[k] = 1;
                           cost[k] = discounted_cost(tau, params.lambda);
                       }
                   });

    const MeanStderr ms = mean_stderr(cost);
    EnsembleStats stats;
    stats.mean = ms.mean;
    stats.std_error = ms.std_error;
    stats.n_traj = cfg.n_traj;
    stats.n_censored = static_cast<int>(
        std::count(censored.begin(), censored.end(), std::uint8_t{1}));
    stats.all_censored = stats.n_censored == cfg.n_traj;
    return stats;
}

EnsembleStats estimate_discounted_hitting(double theta0, const Policy& policy,
                                          const EnsembleConfig& cfg,
                                          const SystemParams& params) {
    return estimate_discounted_hitting(theta0, policy, cfg, params,
                                       -params.target_angle, params.target_angle);
}

EnsembleStats estimate_mean_hitting(double theta0, const Policy& policy,
                                    const EnsembleConfig& cfg,
                                    const SystemParams& params) {
    params.validate();
    check_config(cfg);
    if (!(cfg.t_max > 0.0))
        throw std::invalid_argument("mean-hitting estimate needs an explicit t_max");

    SimulateOptions opts;
    opts.dt = cfg.dt;
    opts.t_max = cfg.t_max;
    opts.absorb = true;
    opts.lo = -params.target_angle;
    opts.hi = params.target_angle;

    std::vector<double> tau(cfg.n_traj);
    std::vector<std::uint8_t> censored(cfg.n_traj, 0);
    for_each_chunk(cfg.n_traj, resolve_threads(cfg.threads),
                   [&](int, int begin, int end) {
                       for (int k = begin; k < end; ++k) {
                           const auto hit = detail::run_path(
                               theta0, policy, opts,
                               trajectory_seed(cfg.master_seed, static_cast<std::uint64_t>(k)),
                               params, [](std::size_t, double, double, double) {});
                           if (hit) tau[k] = hit->time;
                           else censored[k] = 1;
                       }
                   });

    std::vector<double> kept;
    kept.reserve(tau.size());
    for (int k = 0; k < cfg.n_traj; ++k)
        if (!censored[k]) kept.push_back(tau[k]);

    EnsembleStats stats;
    stats.n_traj = cfg.n_traj;
    stats.n_censored = cfg.n_traj - static_cast<int>(kept.size());
    stats.all_censored = kept.empty();
    if (!kept.empty()) {
        const MeanStderr ms = mean_stderr(kept);
        stats.mean = ms.mean;
        stats.std_error = ms.std_error;
    }
    return stats;
}

ExpectedTrajectoryCurve estimate_expected_trajectory(double theta0, const Policy& policy,
                                                     const EnsembleConfig& cfg,
                                                     const SystemParams& params,
                                                     int sample_stride) {
    params.validate();
    check_config(cfg);
    if (!(cfg.t_max > 0.0))
        throw std::invalid_argument("expected-trajectory estimate needs t_max > 0");
    if (sample_stride < 1) throw std::invalid_argument("sample_stride must be >= 1");

    SimulateOptions opts;
    opts.dt = cfg.dt;
    opts.t_max = cfg.t_max;
    opts.absorb = false;

    const auto n_steps = static_cast<std::size_t>(std::ceil(cfg.t_max / cfg.dt));
    const std::size_t n_samples = n_steps / sample_stride + 1;
    const int n_chunks = (cfg.n_traj + kChunk - 1) / kChunk;

    // Per-chunk partial sums keep the reduction independent of scheduling.
    std::vector<std::vector<double>> part_sum(n_chunks),
        part_sq(n_chunks);

    for_each_chunk(cfg.n_traj, resolve_threads(cfg.threads),
                   [&](int chunk, int begin, int end) {
                       auto& s = part_sum[chunk];
                       auto& q = part_sq[chunk];
                       s.assign(n_samples, 0.0);
                       q.assign(n_samples, 0.0);
                       for (int k = begin; k < end; ++k) {
                           detail::run_path(
                               theta0, policy, opts,
                               trajectory_seed(cfg.master_seed, static_cast<std::uint64_t>(k)),
                               params,
                               [&](std::size_t step, double, double theta, double) {
                                   if (step % static_cast<std::size_t>(sample_stride) != 0)
                                       return;
                                   const std::size_t j = step / sample_stride;
                                   s[j] += theta;
                                   q[j] += theta * theta;
                               });
                       }
                   });

    ExpectedTrajectoryCurve curve;
    curve.times.resize(n_samples);
    curve.mean.resize(n_samples);
    curve.std_error.resize(n_samples);
    const double n = cfg.n_traj;
    std::vector<double> acc(n_chunks);
    for (std::size_t j = 0; j < n_samples; ++j) {
        curve.times[j] = static_cast<double>(j * sample_stride) * cfg.dt;
        for (int c = 0; c < n_chunks; ++c) acc[c] = part_sum[c][j];
        const double m = pairwise_sum(acc) / n;
        for (int c = 0; c < n_chunks; ++c) acc[c] = part_sq[c][j];
        const double sq = pairwise_sum(acc);
        curve.mean[j] = m;
        const double var = cfg.n_traj > 1 ? std::max(0.0, (sq - n * m * m) / (n - 1.0)) : 0.0;
        curve.std_error[j] = std::sqrt(var / n);
    }

    for (std::size_t j = 1; j < n_samples; ++j) {
        const double a = std::abs(curve.mean[j - 1]);
        const double b = std::abs(curve.mean[j]);
        if (b >= std::numbers::pi && a < std::numbers::pi) {
            const double w = (std::numbers::pi - a) / (b - a);
            curve.crossing = curve.times[j - 1] + w * (curve.times[j] - curve.times[j - 1]);
            break;
        }
    }
    return curve;
}

std::vector<OmegaSweepRow> omega_sweep(const std::vector<double>& omegas, double theta0,
                                       const EnsembleConfig& cfg,
                                       const SystemParams& params,
                                       const OmegaSweepOptions& opts) {
    std::vector<OmegaSweepRow> rows;
    rows.reserve(omegas.size());
    const double pi = std::numbers::pi;
    for (double om : omegas) {
        OmegaSweepRow row;
        row.omega = om;
        try {
            SystemParams p = params;
            p.omega = om;
            p.validate();
            p.require_omega_dominates();

            const hitting::Grid grid(opts.pde_n);
            const hitting::HittingSolution sol =
                hitting::value_iteration(grid, p, opts.solve);
            if (!sol.converged)
                throw std::runtime_error("value iteration did not converge");
            const int c = grid.center();
            row.pde_value = sol.value.values[c];
            if (theta0 != 0.0) {
                // interpolated read-off away from the center node
                const double pos = (theta0 - grid.theta.front()) / grid.h;
                const int i = std::min(static_cast<int>(pos), grid.n - 2);
                const double w = pos - i;
                row.pde_value = (1.0 - w) * sol.value.values[i] + w * sol.value.values[i + 1];
            }

            // Absorbed boundary nodes carry no control decision; extend the
            // adjacent interior control so the lookup never returns 0 inside
            // the last half-cell.
            std::vector<double> ctrl = sol.policy.controls;
            ctrl.front() = ctrl[1];
            ctrl.back() = ctrl[ctrl.size() - 2];
            const Policy policy = table_policy(std::move(ctrl), -pi, pi,
                                               "hjb-hitting-optimal");
            row.stats = estimate_discounted_hitting(theta0, policy, cfg, p);

            row.hamiltonian = pi / om;
            row.disc_hamiltonian = -std::expm1(-p.lambda * pi / om) / p.lambda;
        } catch (const std::exception& e) {
            row.error = e.what();
            const double nan = std::nan("");
            row.pde_value = row.hamiltonian = row.disc_hamiltonian = nan;
            row.stats = {};
            row.stats.mean = nan;
            row.stats.std_error = nan;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

TargetExperiment hitting_to_target(double start, double target,
                                   const EnsembleConfig& cfg,
                                   const SystemParams& params) {
    // Absorb at either circle representative of the target state bracketing
    // the start angle.
    const double two_pi = 2.0 * std::numbers::pi;
    const double lo = target < start ? target : target - two_pi;
    const double hi = lo + two_pi;
    if (start == target || start == lo || start == hi)
        return {start, target, EnsembleStats{0.0, 0.0, 0, cfg.n_traj, false}};

    const double mid = 0.5 * (lo + hi);
    const double om = params.omega;
    Policy toward{[mid, om](double theta) { return theta >= mid ? om : -om; },
                  "bang-toward-target"};
    TargetExperiment exp;
    exp.start = start;
    exp.target = target;
    exp.stats = estimate_discounted_hitting(start, toward, cfg, params, lo, hi);
    return exp;
}

AlternateTargetsComparison alternate_targets_experiment(const EnsembleConfig& cfg,
                                                        const SystemParams& params) {
    const double pi = std::numbers::pi;
    AlternateTargetsComparison cmp;
    cmp.x_to_minus_x = hitting_to_target(pi / 2.0, -pi / 2.0, cfg, params);
    EnsembleConfig zcfg = cfg;
    zcfg.master_seed = splitmix64(cfg.master_seed ^ 0x7a6b5c4d3e2f1a0bULL);
    cmp.z_to_minus_z = hitting_to_target(0.0, pi, zcfg, params);
    return cmp;
}

} // namespace qhjb::mc
