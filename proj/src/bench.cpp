#include "qsemis/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <thread>
#include <tuple>

#include "qsemis/errors.hpp"
#include "qsemis/graph.hpp"
#include "qsemis/simulator.hpp"

namespace qsemis {

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void append_metric_fields(std::string& out, const Metrics& m) {
    out += fmt(m.energy);
    out += ',';
    out += fmt(m.approx_ratio);
    out += ',';
    out += fmt(m.fidelity);
    out += ',';
    out += fmt(m.hamming_error);
    out += ',';
    out += fmt(m.parity_error);
}

std::string csv_escape(const std::string& s) {
    std::string out;
    for (char c : s) out += (c == ',' || c == '\n' || c == '\r') ? ';' : c;
    return out;
}

}  // namespace

BenchResult run_bench(const BenchConfig& cfg) {
    if (cfg.n_min < 1 || cfg.n_max < cfg.n_min) throw ConfigError("bench: invalid size range");
    if (cfg.n_max > kMaxDenseVertices) throw ConfigError("bench: n_max exceeds dense-solver limit");
    if (cfg.graphs_per_size < 1) throw ConfigError("bench: graphs_per_size must be >= 1");
    if (cfg.rho < 0.0 || cfg.rho > 1.0) throw ConfigError("bench: rho must lie in [0, 1]");
    if (cfg.jobs < 1) throw ConfigError("bench: jobs must be >= 1");

    struct Task {
        int n;
        std::uint64_t graph_seed;
    };
    std::vector<Task> tasks;
    for (int n = cfg.n_min; n <= cfg.n_max; ++n)
        for (int i = 0; i < cfg.graphs_per_size; ++i)
            tasks.push_back({n, derive_seed(cfg.seed, static_cast<std::uint64_t>(n) * 1000 + i)});

    std::vector<std::vector<BenchRow>> slots(tasks.size());
    auto run_task = [&](std::size_t t) {
        const Task& task = tasks[t];
        std::vector<BenchRow>& rows = slots[t];
        auto stub = [&](const std::string& method, int k) {
            BenchRow r;
            r.n = task.n;
            r.graph_seed = task.graph_seed;
            r.method = method;
            r.k = k;
            return r;
        };
        try {
            const Graph g = generate_er(task.n, cfg.rho, task.graph_seed);
            PipelineConfig pc = cfg.pipeline;
            PipelineResult res = run_pipeline(g, pc);
            BenchRow qaoa = stub("qaoa", 0);
            qaoa.metrics = res.qaoa_metrics;
            rows.push_back(qaoa);
            for (const QseRun& run : res.qse) {
                BenchRow row = stub("qse", run.k);
                row.metrics = run.metrics;
                rows.push_back(row);
            }
        } catch (const std::exception& e) {
            rows.clear();
            BenchRow qaoa = stub("qaoa", 0);
            qaoa.ok = false;
            qaoa.error = e.what();
            rows.push_back(qaoa);
            for (int k : cfg.pipeline.k_list) {
                BenchRow row = stub("qse", k);
                row.ok = false;
                row.error = e.what();
                rows.push_back(row);
            }
        }
    };

    if (cfg.jobs == 1 || tasks.size() <= 1) {
        for (std::size_t t = 0; t < tasks.size(); ++t) run_task(t);
    } else {
        std::atomic<std::size_t> next{0};
        const int workers = std::min<int>(cfg.jobs, static_cast<int>(tasks.size()));
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t t = next.fetch_add(1); t < tasks.size(); t = next.fetch_add(1))
                    run_task(t);
            });
        for (std::thread& th : pool) th.join();
    }

    BenchResult result;
    result.config = cfg;
    for (std::vector<BenchRow>& rows : slots)
        for (BenchRow& row : rows) result.rows.push_back(std::move(row));
    std::sort(result.rows.begin(), result.rows.end(), [](const BenchRow& a, const BenchRow& b) {
        return std::tie(a.n, a.graph_seed, a.method, a.k) < std::tie(b.n, b.graph_seed, b.method, b.k);
    });
    return result;
}

std::string bench_csv(const BenchResult& r) {
    const BenchConfig& c = r.config;
    std::string out;
    out += "# bench-er sweep\n";
    out += "# schema_version,1\n";
    out += "# n_min," + std::to_string(c.n_min) + "\n";
    out += "# n_max," + std::to_string(c.n_max) + "\n";
    out += "# graphs_per_size," + std::to_string(c.graphs_per_size) + "\n";
    out += "# rho," + fmt(c.rho) + "\n";
    out += "# seed," + std::to_string(c.seed) + "\n";
    out += "# jobs," + std::to_string(c.jobs) + "\n";
    out += "# layers," + std::to_string(c.pipeline.layers) + "\n";
    std::string ks;
    for (int k : c.pipeline.k_list) {
        if (!ks.empty()) ks += ';';
        ks += std::to_string(k);
    }
    out += "# k_list," + ks + "\n";
    out += "# epsilon_cut," + fmt(c.pipeline.epsilon_cut) + "\n";
    out += std::string("# kernel_mode,") +
           (c.pipeline.kernel_mode == KernelMode::exact ? "exact" : "sampled") + "\n";
    out += "# shots," + std::to_string(c.pipeline.shots) + "\n";
    out += "# pipeline_seed," + std::to_string(c.pipeline.seed) + "\n";
    out += "# rng,mt19937_64/53bit\n";
    out += "kind,n,graph_seed,method,k,status,energy,approx_ratio,fidelity,hamming_error,parity_error\n";

    for (const BenchRow& row : r.rows) {
        out += "row,";
        out += std::to_string(row.n) + ",";
        out += std::to_string(row.graph_seed) + ",";
        out += row.method + ",";
        out += std::to_string(row.k) + ",";
        if (row.ok) {
            out += "ok,";
            append_metric_fields(out, row.metrics);
        } else {
            out += "error:" + csv_escape(row.error) + ",,,,,";
        }
        out += '\n';
    }

    // Aggregate successful rows per (n, method, k); sample standard deviation.
    std::map<std::tuple<int, std::string, int>, std::vector<Metrics>> groups;
    for (const BenchRow& row : r.rows)
        if (row.ok) groups[{row.n, row.method, row.k}].push_back(row.metrics);
    for (const auto& [key, metrics] : groups) {
        const auto& [n, method, k] = key;
        const double count = static_cast<double>(metrics.size());
        auto field = [&](double Metrics::*p) {
            double mean = 0.0;
            for (const Metrics& m : metrics) mean += m.*p;
            mean /= count;
            double var = 0.0;
            for (const Metrics& m : metrics) var += (m.*p - mean) * (m.*p - mean);
            var = metrics.size() > 1 ? var / (count - 1.0) : 0.0;
            return std::pair<double, double>{mean, std::sqrt(var)};
        };
        const auto energy = field(&Metrics::energy);
        const auto ratio = field(&Metrics::approx_ratio);
        const auto fid = field(&Metrics::fidelity);
        const auto ham = field(&Metrics::hamming_error);
        const auto par = field(&Metrics::parity_error);
        auto emit = [&](const char* kind, double e, double a, double f, double h, double p) {
            out += std::string(kind) + "," + std::to_string(n) + ",," + method + "," +
                   std::to_string(k) + ",ok," + fmt(e) + "," + fmt(a) + "," + fmt(f) + "," +
                   fmt(h) + "," + fmt(p) + "\n";
        };
        emit("mean", energy.first, ratio.first, fid.first, ham.first, par.first);
        emit("std", energy.second, ratio.second, fid.second, ham.second, par.second);
    }
    return out;
}

std::vector<std::pair<double, double>> mean_fidelity_by_size(const BenchResult& r,
                                                             const std::string& method, int k) {
    std::map<int, std::pair<double, int>> acc;
    for (const BenchRow& row : r.rows)
        if (row.ok && row.method == method && row.k == k) {
            acc[row.n].first += row.metrics.fidelity;
            acc[row.n].second += 1;
        }
    std::vector<std::pair<double, double>> points;
    for (const auto& [n, sum_count] : acc)
        points.emplace_back(static_cast<double>(n), sum_count.first / sum_count.second);
    return points;
}

}  // namespace qsemis
