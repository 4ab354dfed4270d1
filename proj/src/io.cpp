#include "qhjb/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace qhjb::io {

using nlohmann::json;

std::string full(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

json params_json(const SystemParams& p) {
    return {{"gamma", p.gamma},
            {"omega", p.omega},
            {"lambda", p.lambda},
            {"target_angle", p.target_angle}};
}

void dump(const std::string& path, const json& j) {
    auto out = open_out(path);
    out << j.dump(2) << "\n";
}

} // namespace

void write_manifest(const std::string& path, const RunManifest& m) {
    json j{{"command", m.command},
           {"args", m.args},
           {"version", m.version},
           {"wall_seconds", m.wall_seconds},
           {"outputs", m.outputs},
           {"warnings", m.warnings}};
    dump(path, j);
}

RunManifest read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open manifest: " + path);
    json j;
    in >> j;
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.args = j.at("args").get<std::map<std::string, std::string>>();
    m.version = j.value("version", std::string{});
    m.wall_seconds = j.value("wall_seconds", 0.0);
    if (j.contains("outputs")) m.outputs = j["outputs"].get<std::vector<std::string>>();
    if (j.contains("warnings")) m.warnings = j["warnings"].get<std::vector<std::string>>();
    return m;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    auto out = open_out(path);
    out << "t,theta,control\n";
    for (std::size_t i = 0; i < traj.size(); ++i)
        out << full(traj.times[i]) << ',' << full(traj.thetas[i]) << ','
            << full(traj.controls[i]) << '\n';
}

void write_trajectory_sidecar(const std::string& path, const Trajectory& traj,
                              const SystemParams& params) {
    json j{{"seed", traj.seed},
           {"dt", traj.dt},
           {"wrapped", traj.wrapped},
           {"params", params_json(params)}};
    if (traj.hit) {
        j["hit_time"] = traj.hit->time;
        j["hit_boundary"] = traj.hit->boundary;
    }
    dump(path, j);
}

void write_hitting_csv(const std::string& path, const hitting::HittingSolution& sol) {
    auto out = open_out(path);
    out << "theta,value,control\n";
    for (int i = 0; i < sol.grid.n; ++i)
        out << full(sol.grid.theta[i]) << ',' << full(sol.value.values[i]) << ','
            << full(sol.policy.controls[i]) << '\n';
}

void write_hitting_meta(const std::string& path, const hitting::HittingSolution& sol,
                        const SystemParams& params, const hitting::SolveOptions& opts) {
    json j{{"params", params_json(params)},
           {"n", sol.grid.n},
           {"tol", opts.tol},
           {"max_iter", opts.max_iter},
           {"iterations", sol.iterations},
           {"residual", sol.residual},
           {"converged", sol.converged},
           {"tie_nodes", sol.tie_nodes},
           {"pde_residual", 0.0}};
    if (params.lambda == 0.0) j["lambda_zero_experimental"] = true;
    j["pde_residual"] = hitting::residual_diagnostic(sol, params);
    dump(path, j);
}

void write_horizon_csv(const std::string& path, const horizon::HorizonSolution& sol) {
    auto out = open_out(path);
    out << "t,theta,value,control\n";
    for (std::size_t l = 0; l < sol.kept_times.size(); ++l) {
        const std::string t = full(sol.kept_times[l]);
        for (int i = 0; i < sol.grid.m; ++i)
            out << t << ',' << full(sol.grid.nodes[i]) << ','
                << full(sol.kept_levels[l][i]) << ',' << full(sol.kept_controls[l][i])
                << '\n';
    }
}

void write_sweep_csv(const std::string& path, const std::vector<mc::OmegaSweepRow>& rows) {
    auto out = open_out(path);
    out << "omega,mc_mean,mc_stderr,pde_value,disc_hamiltonian,hamiltonian,n_censored\n";
    for (const auto& r : rows)
        out << full(r.omega) << ',' << full(r.stats.mean) << ','
            << full(r.stats.std_error) << ',' << full(r.pde_value) << ','
            << full(r.disc_hamiltonian) << ',' << full(r.hamiltonian) << ','
            << r.stats.n_censored << '\n';
}

} // namespace qhjb::io
