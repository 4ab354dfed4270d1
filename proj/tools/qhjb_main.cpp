// Command-line front end: solves, simulates, sweeps and bounds, emitting CSV
// data plus JSON metadata and a replayable run manifest per invocation.
//
// Exit codes: 0 success, 1 flag/usage error, 2 numerical failure.

#include "qhjb/bounds.hpp"
#include "qhjb/consistency.hpp"
#include "qhjb/dynamics.hpp"
#include "qhjb/hitting.hpp"
#include "qhjb/horizon.hpp"
#include "qhjb/io.hpp"
#include "qhjb/montecarlo.hpp"
#include "qhjb/simulate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

namespace {

using qhjb::SystemParams;
using qhjb::io::RunManifest;
using ArgMap = std::map<std::string, std::string>;
using nlohmann::json;

double arg_d(const ArgMap& a, const std::string& key) {
    return std::stod(a.at(key));
}

long long arg_i(const ArgMap& a, const std::string& key) {
    return std::stoll(a.at(key));
}

SystemParams params_from(const ArgMap& a) {
    SystemParams p;
    p.gamma = arg_d(a, "gamma");
    p.omega = arg_d(a, "omega");
    if (a.count("lambda")) p.lambda = arg_d(a, "lambda");
    p.validate();
    return p;
}

qhjb::Policy parse_policy(const std::string& spec, const SystemParams& p) {
    if (spec == "sign") return qhjb::sign_policy(p.omega);
    if (spec.rfind("const:", 0) == 0) {
        const double v = std::stod(spec.substr(6));
        p.require_control(v);
        return qhjb::constant_policy(v);
    }
    throw std::invalid_argument("unknown policy descriptor: " + spec +
                                " (expected sign or const:<value>)");
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void finish_manifest(const std::string& command, const ArgMap& args, const Timer& timer,
                     RunManifest& m) {
    m.command = command;
    m.args = args;
    m.wall_seconds = timer.seconds();
    m.outputs.push_back(args.at("out") + ".manifest.json");
    qhjb::io::write_manifest(args.at("out") + ".manifest.json", m);
}

void dump_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

int cmd_solve_hitting(const ArgMap& args) {
    Timer timer;
    const SystemParams p = params_from(args);
    p.require_omega_dominates();
    qhjb::hitting::SolveOptions opts;
    opts.tol = arg_d(args, "tol");
    opts.max_iter = static_cast<std::uint64_t>(arg_i(args, "max_iter"));
    const qhjb::hitting::Grid grid(static_cast<int>(arg_i(args, "n")));
    const auto sol = qhjb::hitting::value_iteration(grid, p, opts);

    const std::string out = args.at("out");
    qhjb::io::write_hitting_csv(out + ".csv", sol);
    qhjb::io::write_hitting_meta(out + ".meta.json", sol, p, opts);

    RunManifest m;
    m.outputs = {out + ".csv", out + ".meta.json"};
    if (p.lambda == 0.0)
        m.warnings.push_back("lambda = 0: discounted-case uniqueness theory does not "
                             "apply; results are experimental");
    if (!sol.converged)
        m.warnings.push_back("value iteration hit max_iter before tol");
    finish_manifest("solve-hitting", args, timer, m);

    std::printf("S(0) = %s after %llu sweeps (residual %s)\n",
                qhjb::io::full(sol.value.values[grid.center()]).c_str(),
                static_cast<unsigned long long>(sol.iterations),
                qhjb::io::full(sol.residual).c_str());
    return sol.converged ? 0 : 2;
}

int cmd_solve_horizon(const ArgMap& args) {
    Timer timer;
    const SystemParams p = params_from(args);
    qhjb::horizon::HorizonOptions opts;
    opts.spacing = arg_d(args, "spacing");
    const double theta0 = arg_d(args, "theta0");
    const double T = arg_d(args, "T");
    const auto sa = qhjb::horizon::solve_sa(T, p, opts, theta0);
    const auto sb = qhjb::horizon::solve_sb(T, p, opts, theta0);

    const std::string out = args.at("out");
    qhjb::io::write_horizon_csv(out + ".sa.csv", sa);
    qhjb::io::write_horizon_csv(out + ".sb.csv", sb);
    const double va = sa.value_at(theta0);
    const double vb = sb.value_at(theta0);
    dump_json(out + ".meta.json",
              json{{"theta0", theta0},
                   {"T", T},
                   {"sa", va},
                   {"sb", vb},
                   {"expected_final_angle", std::max(va, vb)},
                   {"sa_policy_all_plus_omega", sa.all_plus_omega},
                   {"grid", json{{"h", sa.grid.h},
                                 {"k", sa.grid.k},
                                 {"L", sa.grid.L},
                                 {"m", sa.grid.m},
                                 {"steps", sa.grid.steps}}}});

    RunManifest m;
    m.outputs = {out + ".sa.csv", out + ".sb.csv", out + ".meta.json"};
    finish_manifest("solve-horizon", args, timer, m);
    std::printf("S_a = %s  S_b = %s  max = %s\n", qhjb::io::full(va).c_str(),
                qhjb::io::full(vb).c_str(), qhjb::io::full(std::max(va, vb)).c_str());
    return 0;
}

int cmd_reach_time(const ArgMap& args) {
    Timer timer;
    const SystemParams p = params_from(args);
    qhjb::horizon::HorizonOptions opts;
    opts.spacing = arg_d(args, "spacing");
    const double theta0 = arg_d(args, "theta0");
    const double tol_T = arg_d(args, "tolT");
    const auto r = qhjb::horizon::reaching_time(theta0, p, tol_T, opts);

    const std::string out = args.at("out");
    dump_json(out + ".json", json{{"theta0", theta0},
                                  {"R", r.value},
                                  {"tol_T", tol_T},
                                  {"brackets", json{{"lo", r.bracket_lo},
                                                    {"hi", r.bracket_hi},
                                                    {"doublings", r.doublings}}}});
    RunManifest m;
    m.outputs = {out + ".json"};
    finish_manifest("reach-time", args, timer, m);
    std::printf("R(%s) = %s\n", qhjb::io::full(theta0).c_str(),
                qhjb::io::full(r.value).c_str());
    return 0;
}

int cmd_simulate(const ArgMap& args) {
    Timer timer;
    const SystemParams p = params_from(args);
    const qhjb::Policy policy = parse_policy(args.at("policy"), p);
    qhjb::SimulateOptions opts;
    opts.dt = arg_d(args, "dt");
    opts.t_max = arg_d(args, "tmax");
    opts.absorb = arg_i(args, "absorb") != 0;
    opts.lo = -p.target_angle;
    opts.hi = p.target_angle;
    const auto traj = qhjb::simulate(arg_d(args, "theta0"), policy, opts,
                                     static_cast<std::uint64_t>(arg_i(args, "seed")), p);

    const std::string out = args.at("out");
    qhjb::io::write_trajectory_csv(out + ".csv", traj);
    qhjb::io::write_trajectory_sidecar(out + ".json", traj, p);
    RunManifest m;
    m.outputs = {out + ".csv", out + ".json"};
    finish_manifest("simulate", args, timer, m);
    if (traj.hit)
        std::printf("absorbed at t = %s\n", qhjb::io::full(traj.hit->time).c_str());
    else
        std::printf("not absorbed within t_max (%zu samples)\n", traj.size());
    return 0;
}

int cmd_sweep_omega(const ArgMap& args) {
    Timer timer;
    SystemParams p = params_from(args);

    std::vector<double> omegas;
    std::stringstream ss(args.at("omegas"));
    for (std::string tok; std::getline(ss, tok, ',');)
        if (!tok.empty()) omegas.push_back(std::stod(tok));
    if (omegas.empty()) throw std::invalid_argument("empty omega list");
    p.omega = omegas.front();

    qhjb::mc::EnsembleConfig cfg;
    cfg.n_traj = static_cast<int>(arg_i(args, "ntraj"));
    cfg.dt = arg_d(args, "dt");
    cfg.t_max = arg_d(args, "tmax");
    cfg.master_seed = static_cast<std::uint64_t>(arg_i(args, "seed"));
    qhjb::mc::OmegaSweepOptions sweep_opts;
    sweep_opts.pde_n = static_cast<int>(arg_i(args, "n"));

    const auto rows =
        qhjb::mc::omega_sweep(omegas, arg_d(args, "theta0"), cfg, p, sweep_opts);

    const std::string out = args.at("out");
    qhjb::io::write_sweep_csv(out + ".csv", rows);
    RunManifest m;
    m.outputs = {out + ".csv"};
    int failed = 0;
    for (const auto& r : rows)
        if (!r.error.empty()) {
            ++failed;
            m.warnings.push_back("omega " + qhjb::io::full(r.omega) + ": " + r.error);
        }
    finish_manifest("sweep-omega", args, timer, m);
    std::printf("%zu rows (%d failed) -> %s.csv\n", rows.size(), failed, out.c_str());
    return failed == static_cast<int>(rows.size()) ? 2 : 0;
}

int cmd_consistency_check(const ArgMap& args) {
    Timer timer;
    SystemParams p;
    p.gamma = arg_d(args, "gamma");
    p.omega = arg_d(args, "omega");
    p.validate();
    qhjb::consistency::Options opts;
    opts.dt = arg_d(args, "dt");
    opts.master_seed = static_cast<std::uint64_t>(arg_i(args, "seed"));
    opts.v = p.omega;
    const auto rep = qhjb::consistency::run_consistency(opts, p);

    json levels = json::array();
    for (const auto& l : rep.levels)
        levels.push_back(json{{"dt", l.dt}, {"max_angle_gap", l.max_angle_gap}});
    json coeff = json::array();
    for (std::size_t i = 0; i < rep.coeff_dts.size(); ++i)
        coeff.push_back(json{{"dt", rep.coeff_dts[i]}, {"err", rep.coeff_errs[i]}});

    const std::string out = args.at("out");
    dump_json(out + ".json", json{{"levels", levels},
                                  {"pivot_gap_ok", rep.pivot_gap_ok},
                                  {"halving_decreases", rep.halving_decreases},
                                  {"monotone_all", rep.monotone_all},
                                  {"coefficient_errors", coeff},
                                  {"coeff_worst_ratio", rep.coeff_worst_ratio},
                                  {"coeff_first_order", rep.coeff_first_order},
                                  {"pass", rep.pass}});
    RunManifest m;
    m.outputs = {out + ".json"};
    finish_manifest("consistency-check", args, timer, m);
    std::printf("consistency: %s (pivot gap %s)\n", rep.pass ? "pass" : "FAIL",
                qhjb::io::full(rep.levels[1].max_angle_gap).c_str());
    return rep.pass ? 0 : 2;
}

int cmd_bounds(const ArgMap& args) {
    Timer timer;
    const SystemParams p = params_from(args);
    qhjb::bounds::PurityTarget target{arg_d(args, "P"), std::numbers::pi};
    qhjb::bounds::PreparationOptions opts;
    opts.hitting_n = static_cast<int>(arg_i(args, "n"));
    opts.tol_T = arg_d(args, "tolT");
    const auto b = qhjb::bounds::preparation_bounds(target, p, opts);

    // Transparency extra: undiscounted Monte Carlo rotation-time estimate.
    qhjb::mc::EnsembleConfig cfg;
    cfg.n_traj = 2000;
    cfg.dt = 1e-4 / p.gamma;
    cfg.t_max = 100.0 / p.gamma;
    cfg.master_seed = 1u;
    const auto mc_rot =
        qhjb::mc::estimate_mean_hitting(0.0, qhjb::sign_policy(p.omega), cfg, p);

    const std::string out = args.at("out");
    dump_json(out + ".json",
              json{{"P", b.purity},
                   {"gamma", p.gamma},
                   {"tau_wr", b.tau_wr},
                   {"t_jacobs", b.t_jacobs},
                   {"tau_r", b.tau_r},
                   {"t_r", b.t_r},
                   {"tau_UB", b.tau_ub},
                   {"t_LB", b.t_lb},
                   {"t_UB", b.t_ub},
                   {"ordering_holds", b.ordering_holds},
                   {"sign_correction_applied", b.sign_correction_applied},
                   {"mc_rotation_time_undiscounted",
                    json{{"mean", mc_rot.mean},
                         {"std_error", mc_rot.std_error},
                         {"n_censored", mc_rot.n_censored}}}});
    RunManifest m;
    m.outputs = {out + ".json"};
    if (!b.ordering_holds)
        m.warnings.push_back("t_LB > t_UB: the purification reference times order as "
                             "t_jacobs > tau_wr on (1/2,1), so these composites cannot "
                             "order the other way");
    finish_manifest("bounds", args, timer, m);
    std::printf("tau_UB = %s  t_LB = %s  t_UB = %s\n", qhjb::io::full(b.tau_ub).c_str(),
                qhjb::io::full(b.t_lb).c_str(), qhjb::io::full(b.t_ub).c_str());
    return 0;
}

int dispatch(const std::string& cmd, const ArgMap& args);

int cmd_replay(const std::string& manifest_path, const std::string& out) {
    RunManifest m = qhjb::io::read_manifest(manifest_path);
    ArgMap args = m.args;
    if (!out.empty()) args["out"] = out;
    return dispatch(m.command, args);
}

int dispatch(const std::string& cmd, const ArgMap& args) {
    if (cmd == "solve-hitting") return cmd_solve_hitting(args);
    if (cmd == "solve-horizon") return cmd_solve_horizon(args);
    if (cmd == "reach-time") return cmd_reach_time(args);
    if (cmd == "simulate") return cmd_simulate(args);
    if (cmd == "sweep-omega") return cmd_sweep_omega(args);
    if (cmd == "consistency-check") return cmd_consistency_check(args);
    if (cmd == "bounds") return cmd_bounds(args);
    throw std::invalid_argument("unknown command in manifest: " + cmd);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal rotation control of a continuously monitored qubit: "
                 "HJB solvers, SDE simulation and preparation-time bounds"};
    app.require_subcommand(1);

    std::map<std::string, ArgMap> sub_args;
    auto add_d = [&](CLI::App* sub, const std::string& name, double def,
                     const std::string& help) {
        ArgMap& args = sub_args[sub->get_name()];
        args.emplace(name, qhjb::io::full(def));
        sub->add_option_function<double>(
               "--" + name, [&args, name](double v) { args[name] = qhjb::io::full(v); },
               help)
            ->capture_default_str();
    };
    auto add_i = [&](CLI::App* sub, const std::string& name, long long def,
                     const std::string& help) {
        ArgMap& args = sub_args[sub->get_name()];
        args.emplace(name, std::to_string(def));
        sub->add_option_function<long long>(
               "--" + name,
               [&args, name](long long v) { args[name] = std::to_string(v); }, help)
            ->capture_default_str();
    };
    auto add_s = [&](CLI::App* sub, const std::string& name, const std::string& def,
                     const std::string& help) {
        ArgMap& args = sub_args[sub->get_name()];
        args.emplace(name, def);
        sub->add_option_function<std::string>(
               "--" + name,
               [&args, name](const std::string& v) { args[name] = v; }, help)
            ->capture_default_str();
    };

    auto* hit = app.add_subcommand("solve-hitting",
                                   "Discounted mean-hitting-time value iteration");
    add_d(hit, "omega", 10.0, "control bound");
    add_d(hit, "gamma", 1.0, "measurement strength");
    add_d(hit, "lambda", 3.0, "discount factor");
    add_i(hit, "n", 401, "grid nodes (odd)");
    add_d(hit, "tol", 1e-10, "sup-norm stopping tolerance");
    add_i(hit, "max_iter", 10000000, "sweep limit");
    add_s(hit, "out", "hitting", "output prefix");

    auto* hor = app.add_subcommand("solve-horizon", "Fixed-horizon Mayer values S_a/S_b");
    add_d(hor, "omega", 10.0, "control bound");
    add_d(hor, "gamma", 1.0, "measurement strength");
    add_d(hor, "theta0", 0.0, "start angle");
    add_d(hor, "T", 0.5, "horizon");
    add_d(hor, "spacing", 0.02, "spatial step");
    add_s(hor, "out", "horizon", "output prefix");

    auto* reach = app.add_subcommand("reach-time", "Expected-trajectory reaching time");
    add_d(reach, "omega", 10.0, "control bound");
    add_d(reach, "gamma", 1.0, "measurement strength");
    add_d(reach, "theta0", 0.0, "start angle");
    add_d(reach, "tolT", 1e-4, "bisection tolerance");
    add_d(reach, "spacing", 0.02, "spatial step");
    add_s(reach, "out", "reach", "output prefix");

    auto* sim = app.add_subcommand("simulate", "Single SDE trajectory dump");
    add_d(sim, "omega", 10.0, "control bound");
    add_d(sim, "gamma", 1.0, "measurement strength");
    add_d(sim, "theta0", 0.0, "start angle");
    add_s(sim, "policy", "sign", "sign | const:<value>");
    add_d(sim, "dt", 1e-4, "step size");
    add_d(sim, "tmax", 2.0, "time cutoff");
    add_i(sim, "seed", 1, "trajectory seed");
    add_i(sim, "absorb", 1, "absorb at |theta| = target (1) or free run (0)");
    add_s(sim, "out", "trajectory", "output prefix");

    auto* sweep = app.add_subcommand("sweep-omega",
                                     "Monte Carlo vs PDE discounted hitting sweep");
    add_s(sweep, "omegas", "3,5,10,20,50,200", "comma-separated control bounds");
    add_d(sweep, "gamma", 1.0, "measurement strength");
    add_d(sweep, "lambda", 0.1, "discount factor");
    add_d(sweep, "theta0", 0.0, "start angle");
    add_i(sweep, "ntraj", 5000, "ensemble size");
    add_d(sweep, "dt", 5e-5, "step size");
    add_d(sweep, "tmax", 0.0, "cutoff; 0 derives 50/lambda");
    add_i(sweep, "seed", 20260810, "master seed");
    add_i(sweep, "n", 801, "PDE grid nodes");
    add_s(sweep, "out", "sweep", "output prefix");

    auto* cons = app.add_subcommand("consistency-check",
                                    "Polar/Bloch/density-matrix stepper equivalence");
    add_d(cons, "omega", 10.0, "constant control for the path comparison");
    add_d(cons, "gamma", 1.0, "measurement strength");
    add_d(cons, "dt", 1e-5, "pivot step size");
    add_i(cons, "seed", 97, "master seed");
    add_s(cons, "out", "consistency", "output prefix");

    auto* bnd = app.add_subcommand("bounds", "State-preparation time bounds");
    add_d(bnd, "P", 0.99, "target purity in (1/2, 1)");
    add_d(bnd, "gamma", 1.0, "measurement strength");
    add_d(bnd, "omega", 10.0, "control bound");
    add_d(bnd, "lambda", 0.1, "discount factor for the rotation value");
    add_i(bnd, "n", 801, "hitting grid nodes");
    add_d(bnd, "tolT", 1e-4, "reaching-time tolerance");
    add_s(bnd, "out", "bounds", "output prefix");

    auto* rep = app.add_subcommand("replay", "Re-run a recorded manifest");
    std::string manifest_path;
    std::string replay_out;
    rep->add_option("manifest", manifest_path, "manifest JSON path")->required();
    rep->add_option("--out", replay_out, "override output prefix");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (rep->parsed()) return cmd_replay(manifest_path, replay_out);
        const std::string name = app.get_subcommands().front()->get_name();
        return dispatch(name, sub_args[name]);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
}
