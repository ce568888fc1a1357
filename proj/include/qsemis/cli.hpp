#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsemis/graph.hpp"
#include "qsemis/pipeline.hpp"

namespace qsemis {

inline constexpr const char* kArtifactVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

/// Fully serializable run description; every command embeds it verbatim in
/// its output so a run can be reproduced from the document alone.
struct RunConfig {
    std::string command;  // solve | bench-er | resources | crossover | oracle

    // Graph source: exactly one of these for solve/oracle.
    std::string graph_file;  // --graph FILE
    std::string er_spec;     // --er "N,RHO,SEED"

    // QAOA settings.
    int layers = 20;
    int starts_per_layer = 8;
    double tolerance = 1e-8;
    int max_evals = 200;
    std::uint64_t seed = 1;
    double min_overlap = 0.2;
    int max_seed_attempts = 6;

    // Subspace-expansion settings.
    std::vector<int> k_list = {1, 2, 4, 8};
    double epsilon_cut = kDefaultEpsilonCut;
    std::string kernel_mode = "exact";  // exact | sampled
    std::uint64_t shots = 1'000'000;

    // Output.
    std::string out_path;        // --out FILE; empty = stdout
    std::string format = "json"; // json | csv (resources honours it; sweeps are CSV)
    int top_m = 8;               // probability-table size

    // bench-er sweep.
    int n_min = 2;
    int n_max = 10;
    int graphs_per_size = 14;
    double rho = 0.5;
    int jobs = 1;

    // resources.
    int res_n = 10;
    int l_prime = 10;
    double epsilon = 0.0009765625;  // 2^-10
    int stencil_p = 2;
    double h2 = 1.0;

    // crossover.
    std::string bench_file;
    int cross_k = 8;
    double f_scale = 1.0;
    int bound = 10000;
};

/// Loads the graph named by the config: --graph file or --er spec "N,RHO,SEED"
/// (exactly one must be set).
Graph resolve_graph(const RunConfig& cfg);

/// Translates the run description into the pipeline settings it implies.
PipelineConfig make_pipeline_config(const RunConfig& cfg);

/// Exact-oracle summary of one graph as a JSON document.
std::string cmd_oracle(const RunConfig& cfg);

/// Full chain on one graph: oracle, QAOA, per-K subspace expansion, and
/// top-M probability tables.  JSON document.
std::string cmd_solve(const RunConfig& cfg);

/// Random-graph sweep; returns the CSV document described in bench.hpp.
std::string cmd_bench_er(const RunConfig& cfg);

/// Fault-tolerant gate-cost table for all three kernel-measurement methods,
/// as CSV or JSON depending on cfg.format.  Echoes the inputs.
std::string cmd_resources(const RunConfig& cfg);

/// Fits both fidelity curves from a bench-er CSV and reports the fitted
/// parameters, residuals, and the crossover size (or its absence).  The
/// measured-gain table scales the kernel-cost ratio by cfg.f_scale.
std::string cmd_crossover(const RunConfig& cfg);

/// Same as cmd_crossover but takes the CSV text directly (no file I/O).
std::string cmd_crossover_from_text(const RunConfig& cfg, const std::string& csv_text);

/// Parses argv, dispatches the command, and writes the resulting document to
/// --out or stdout.  Returns the process exit code: 0 success, 2 config
/// error, 3 infeasible size, 4 numerical failure.
int run_cli(int argc, const char* const* argv);

}  // namespace qsemis
