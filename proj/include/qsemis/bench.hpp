#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsemis/pipeline.hpp"

namespace qsemis {

/// Random-graph sweep settings; one pipeline run per (size, instance).
struct BenchConfig {
    int n_min = 2;
    int n_max = 10;
    int graphs_per_size = 14;
    double rho = 0.5;
    std::uint64_t seed = 1;
    int jobs = 1;
    PipelineConfig pipeline;
};

/// One method evaluation on one graph instance. k is 0 for the bare QAOA row.
struct BenchRow {
    int n = 0;
    std::uint64_t graph_seed = 0;
    std::string method;
    int k = 0;
    bool ok = true;
    std::string error;
    Metrics metrics;
};

struct BenchResult {
    BenchConfig config;
    std::vector<BenchRow> rows;
};

/// Runs the sweep. Instances execute concurrently up to `jobs` threads; the
/// row order is always sorted by (n, graph_seed, method, k), independent of
/// scheduling.
BenchResult run_bench(const BenchConfig& cfg);

/// Renders the sweep as CSV: '#' comment header echoing the configuration,
/// one `row` line per evaluation, then `mean` and `std` summary lines per
/// (n, method, k) aggregated over successful rows.
std::string bench_csv(const BenchResult& r);

/// Mean fidelity per graph size for one method/k, from successful rows.
std::vector<std::pair<double, double>> mean_fidelity_by_size(const BenchResult& r,
                                                             const std::string& method, int k);

}  // namespace qsemis
