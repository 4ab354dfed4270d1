#pragma once

#include "qhjb/hitting.hpp"
#include "qhjb/horizon.hpp"
#include "qhjb/montecarlo.hpp"
#include "qhjb/states.hpp"
#include "qhjb/system_params.hpp"

#include <map>
#include <string>
#include <vector>

namespace qhjb::io {

inline constexpr const char* kToolVersion = "qhjb 0.1.0";

/// Round-trip decimal formatting ("%.17g") used for every numeric CSV field.
std::string full(double x);

/// Record of one CLI run; the manifest alone reproduces the run bit-exactly
/// (wall_seconds and the output list are informational).
struct RunManifest {
    std::string command;
    std::map<std::string, std::string> args;
    std::string version = kToolVersion;
    double wall_seconds = 0.0;
    std::vector<std::string> outputs;
    std::vector<std::string> warnings;
};

void write_manifest(const std::string& path, const RunManifest& m);
RunManifest read_manifest(const std::string& path);

void write_trajectory_csv(const std::string& path, const Trajectory& traj);
void write_trajectory_sidecar(const std::string& path, const Trajectory& traj,
                              const SystemParams& params);

void write_hitting_csv(const std::string& path, const hitting::HittingSolution& sol);
void write_hitting_meta(const std::string& path, const hitting::HittingSolution& sol,
                        const SystemParams& params, const hitting::SolveOptions& opts);

void write_horizon_csv(const std::string& path, const horizon::HorizonSolution& sol);

void write_sweep_csv(const std::string& path, const std::vector<mc::OmegaSweepRow>& rows);

} // namespace qhjb::io
