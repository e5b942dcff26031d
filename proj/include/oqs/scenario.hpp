// scenario.hpp — Declarative full-vs-reduced comparison runs: strict JSON
// scenario parsing, run + sweep execution, CSV/JSON artifact generation.
//
// Output files are deterministic: rerunning the same scenario (same seed)
// produces bit-identical bytes. Wall-clock timing therefore lives only in the
// in-memory summary, never in the files.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "oqs/dynamics.hpp"
#include "oqs/models.hpp"

namespace oqs {

enum class ModelKind { lambda, optomech, random_bipartite };

std::string to_string(ModelKind kind);

struct InitialState {
    enum class Preset { ground, thermal, superposition };
    Preset preset = Preset::ground;
    double nbar = 0.0;                // thermal
    std::vector<Complex> amplitudes;  // superposition over the system basis
};

struct Scenario {
    std::string name;
    ModelKind model = ModelKind::optomech;
    LambdaParams lambda;
    OptomechParams optomech;
    RandomBipartiteParams random_bipartite;
    std::uint64_t seed = 0; // random_bipartite only
    TimeGrid grid;          // steps defaults to 4000
    InitialState initial;
    std::vector<std::string> outputs; // defaults to {"occupation"}
};

// Strict parse: unknown keys are rejected with their path, the parameter block
// must be complete for the model tag, and invariants are enforced up front.
Scenario parse_scenario(const std::string& text);

struct RunSummary {
    std::string scenario_name;
    ModelKind model = ModelKind::optomech;
    std::map<std::string, double> values; // fixed key set per model, all finite
    StructureReport structure;
    double wall_seconds = 0.0; // in-memory only; excluded from files
    std::vector<std::string> warnings;
};

struct RunResult {
    RunSummary summary;
    std::string trajectory_csv; // contents of <name>_trajectory.csv
    std::string summary_json;   // contents of <name>_summary.json
};

RunResult run_scenario(const Scenario& scenario);

// Executes run_scenario once per value of the scalar at `param_path` (for
// example "params.g_re" or "grid.steps"); rows are emitted in input order.
// Points may execute concurrently.
std::string sweep_scenario(const Scenario& scenario, const std::string& param_path,
                           const std::vector<double>& values);

// File emission: <name>_trajectory.csv, <name>_summary.json, <name>_sweep.csv.
void write_run_outputs(const RunResult& result, const std::string& out_dir);
void write_sweep_output(const Scenario& scenario, const std::string& csv,
                        const std::string& out_dir);

} // namespace oqs
