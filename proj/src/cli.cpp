#include "qsemis/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qsemis/bench.hpp"
#include "qsemis/errors.hpp"
#include "qsemis/estimator.hpp"
#include "qsemis/hamiltonian.hpp"

namespace qsemis {

namespace {

using json = nlohmann::ordered_json;

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string bitstring(int n, std::uint64_t idx) {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int i = 0; i < n; ++i)
        if ((idx >> i) & 1ULL) s[static_cast<std::size_t>(i)] = '1';
    return s;  // vertex 0 is the leftmost character
}

json config_json(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    j["graph"] = c.graph_file;
    j["er"] = c.er_spec;
    j["layers"] = c.layers;
    j["starts_per_layer"] = c.starts_per_layer;
    j["tolerance"] = c.tolerance;
    j["max_evals"] = c.max_evals;
    j["seed"] = c.seed;
    j["min_overlap"] = c.min_overlap;
    j["max_seed_attempts"] = c.max_seed_attempts;
    j["k_list"] = c.k_list;
    j["epsilon_cut"] = c.epsilon_cut;
    j["kernel_mode"] = c.kernel_mode;
    j["shots"] = c.shots;
    j["out"] = c.out_path;
    j["format"] = c.format;
    j["top_m"] = c.top_m;
    j["n_min"] = c.n_min;
    j["n_max"] = c.n_max;
    j["graphs_per_size"] = c.graphs_per_size;
    j["rho"] = c.rho;
    j["jobs"] = c.jobs;
    j["resources_n"] = c.res_n;
    j["l_prime"] = c.l_prime;
    j["epsilon"] = c.epsilon;
    j["p"] = c.stencil_p;
    j["h2"] = c.h2;
    j["bench"] = c.bench_file;
    j["crossover_k"] = c.cross_k;
    j["f_scale"] = c.f_scale;
    j["bound"] = c.bound;
    return j;
}

json graph_json(const Graph& g) {
    json j;
    j["n"] = g.n;
    j["edge_count"] = g.edge_count();
    json edges = json::array();
    for (const auto& [a, b] : g.edges) edges.push_back(json::array({a, b}));
    j["edges"] = edges;
    j["hash"] = graph_hash(g);
    return j;
}

json metrics_json(const Metrics& m) {
    json j;
    j["energy"] = m.energy;
    j["approx_ratio"] = m.approx_ratio;
    j["fidelity"] = m.fidelity;
    j["hamming_error"] = m.hamming_error;
    j["parity_error"] = m.parity_error;
    return j;
}

json oracle_json(const MisResult& mis, const GroundManifold& manifold) {
    json j;
    j["mis_size"] = mis.size;
    j["solution_count"] = mis.count();
    j["solutions"] = mis.solutions;
    j["emin"] = manifold.emin;
    j["ground_manifold"] = manifold.indices;
    j["ground_manifold_size"] = manifold.indices.size();
    return j;
}

json probability_table(const StateVector& psi, int top_m) {
    std::vector<std::pair<double, std::uint64_t>> entries;
    entries.reserve(psi.amps.size());
    for (std::size_t i = 0; i < psi.amps.size(); ++i)
        entries.emplace_back(std::norm(psi.amps[i]), static_cast<std::uint64_t>(i));
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    const std::size_t count = std::min<std::size_t>(entries.size(), static_cast<std::size_t>(top_m));
    json table = json::array();
    for (std::size_t i = 0; i < count; ++i) {
        json row;
        row["bitstring"] = bitstring(psi.n, entries[i].second);
        row["state"] = entries[i].second;
        row["probability"] = entries[i].first;
        table.push_back(row);
    }
    return table;
}

json fit_json(const FermiDiracFit& fit) {
    json j;
    j["alpha"] = fit.alpha;
    j["beta"] = fit.beta;
    j["residual"] = fit.residual;
    j["low_confidence"] = fit.low_confidence;
    return j;
}

json document_header(const RunConfig& cfg) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["artifact_version"] = kArtifactVersion;
    j["command"] = cfg.command;
    j["config"] = config_json(cfg);
    return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

Graph resolve_graph(const RunConfig& cfg) {
    if (!cfg.graph_file.empty() && !cfg.er_spec.empty())
        throw ConfigError("choose one graph source: --graph or --er, not both");
    if (!cfg.graph_file.empty()) return load_graph_file(cfg.graph_file);
    if (cfg.er_spec.empty()) throw ConfigError("a graph source is required: --graph FILE or --er N,RHO,SEED");

    const std::vector<std::string> parts = split_csv_line(cfg.er_spec);
    if (parts.size() != 3) throw ConfigError("--er expects exactly three fields: N,RHO,SEED");
    int n = 0;
    double rho = 0.0;
    std::uint64_t seed = 0;
    try {
        std::size_t used = 0;
        n = std::stoi(parts[0], &used);
        if (used != parts[0].size()) throw std::invalid_argument("n");
        rho = std::stod(parts[1], &used);
        if (used != parts[1].size()) throw std::invalid_argument("rho");
        seed = std::stoull(parts[2], &used);
        if (used != parts[2].size()) throw std::invalid_argument("seed");
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("--er could not parse \"" + cfg.er_spec + "\" as N,RHO,SEED");
    }
    return generate_er(n, rho, seed);
}

PipelineConfig make_pipeline_config(const RunConfig& cfg) {
    PipelineConfig pc;
    pc.layers = cfg.layers;
    pc.k_list = cfg.k_list;
    pc.epsilon_cut = cfg.epsilon_cut;
    pc.kernel_mode = cfg.kernel_mode == "sampled" ? KernelMode::sampled : KernelMode::exact;
    pc.shots = cfg.shots;
    pc.seed = cfg.seed;
    pc.optimizer.starts_per_layer = cfg.starts_per_layer;
    pc.optimizer.tolerance = cfg.tolerance;
    pc.optimizer.max_evals_per_layer = cfg.max_evals;
    pc.min_overlap = cfg.min_overlap;
    pc.max_seed_attempts = cfg.max_seed_attempts;
    return pc;
}

std::string cmd_oracle(const RunConfig& cfg) {
    const Graph g = resolve_graph(cfg);
    const MisResult mis = brute_force_mis(g);
    const DiagonalOperator d = cost_diagonal(g);
    const GroundManifold manifold = ground_manifold(d);
    json j = document_header(cfg);
    j["graph"] = graph_json(g);
    j["oracle"] = oracle_json(mis, manifold);
    return dump(j);
}

std::string cmd_solve(const RunConfig& cfg) {
    const Graph g = resolve_graph(cfg);
    const PipelineResult res = run_pipeline(g, make_pipeline_config(cfg));

    json j = document_header(cfg);
    j["graph"] = graph_json(g);
    j["oracle"] = oracle_json(res.oracle, res.manifold);

    json qaoa;
    qaoa["seed_used"] = res.seed_used;
    qaoa["seed_attempts"] = res.seed_attempts;
    qaoa["layers"] = cfg.layers;
    qaoa["l_prime"] = res.qaoa.l_prime;
    qaoa["cost_by_depth"] = res.qaoa.cost_by_depth;
    qaoa["gammas"] = res.qaoa.gammas;
    qaoa["betas"] = res.qaoa.betas;
    qaoa["ground_overlap"] = res.qaoa_overlap;
    qaoa["metrics"] = metrics_json(res.qaoa_metrics);
    j["qaoa"] = qaoa;

    json qse = json::array();
    for (const QseRun& run : res.qse) {
        json r;
        r["k"] = run.k;
        r["energy"] = run.energy;
        r["retained"] = run.retained;
        r["reencode_probability"] = run.reencode;
        r["norm_defect"] = run.norm_defect;
        r["residual"] = run.residual;
        json weights = json::array();
        for (const cplx& w : run.ground_weights) weights.push_back(json::array({w.real(), w.imag()}));
        r["ground_weights"] = weights;
        r["metrics"] = metrics_json(run.metrics);
        qse.push_back(r);
    }
    j["qse"] = qse;

    json tables;
    tables["qaoa"] = probability_table(res.qaoa.state, cfg.top_m);
    if (!res.qse.empty()) {
        json largest;
        largest["k"] = res.qse.back().k;
        largest["entries"] = probability_table(res.qse.back().state, cfg.top_m);
        tables["qse"] = largest;
    }
    j["probability_tables"] = tables;
    return dump(j);
}

std::string cmd_bench_er(const RunConfig& cfg) {
    BenchConfig bc;
    bc.n_min = cfg.n_min;
    bc.n_max = cfg.n_max;
    bc.graphs_per_size = cfg.graphs_per_size;
    bc.rho = cfg.rho;
    bc.seed = cfg.seed;
    bc.jobs = cfg.jobs;
    bc.pipeline = make_pipeline_config(cfg);
    return bench_csv(run_bench(bc));
}

std::string cmd_resources(const RunConfig& cfg) {
    const struct {
        CostMethod method;
        const char* name;
    } methods[] = {{CostMethod::pauli, "pauli"}, {CostMethod::rte, "rte"}, {CostMethod::lcu, "lcu"}};
    std::vector<std::pair<std::string, ResourceCount>> rows;
    for (const auto& m : methods)
        rows.emplace_back(m.name, method_cost(m.method, cfg.res_n, cfg.rho, cfg.l_prime, cfg.epsilon,
                                              cfg.stencil_p, cfg.h2));

    if (cfg.format == "csv") {
        std::string out;
        out += "# resources\n";
        out += "# schema_version,1\n";
        out += std::string("# artifact_version,") + kArtifactVersion + "\n";
        out += "method,n,rho,l_prime,epsilon,p,h2,cnot,t_gates,toffoli,ancillas\n";
        for (const auto& [name, rc] : rows) {
            out += name + "," + std::to_string(cfg.res_n) + "," + fmt(cfg.rho) + "," +
                   std::to_string(cfg.l_prime) + "," + fmt(cfg.epsilon) + "," +
                   std::to_string(cfg.stencil_p) + "," + fmt(cfg.h2) + "," + fmt(rc.cnot) + "," +
                   fmt(rc.t_gates) + "," + fmt(rc.toffoli) + "," + fmt(rc.ancillas) + "\n";
        }
        return out;
    }

    json j = document_header(cfg);
    json inputs;
    inputs["n"] = cfg.res_n;
    inputs["rho"] = cfg.rho;
    inputs["l_prime"] = cfg.l_prime;
    inputs["epsilon"] = cfg.epsilon;
    inputs["p"] = cfg.stencil_p;
    inputs["h2"] = cfg.h2;
    j["inputs"] = inputs;
    json out_rows = json::array();
    for (const auto& [name, rc] : rows) {
        json r;
        r["method"] = name;
        r["cnot"] = rc.cnot;
        r["t_gates"] = rc.t_gates;
        r["toffoli"] = rc.toffoli;
        r["ancillas"] = rc.ancillas;
        out_rows.push_back(r);
    }
    j["rows"] = out_rows;
    return dump(j);
}

std::string cmd_crossover_from_text(const RunConfig& cfg, const std::string& csv_text) {
    std::istringstream in(csv_text);
    std::string line;
    std::vector<std::string> header;
    // column index lookup, filled from the first non-comment line
    int col_kind = -1, col_n = -1, col_method = -1, col_k = -1, col_status = -1, col_fid = -1;
    std::map<int, std::pair<double, int>> qaoa_acc, qse_acc;  // n -> (fidelity sum, count)
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (header.empty()) {
            header = fields;
            for (std::size_t i = 0; i < header.size(); ++i) {
                const int idx = static_cast<int>(i);
                if (header[i] == "kind") col_kind = idx;
                if (header[i] == "n") col_n = idx;
                if (header[i] == "method") col_method = idx;
                if (header[i] == "k") col_k = idx;
                if (header[i] == "status") col_status = idx;
                if (header[i] == "fidelity") col_fid = idx;
            }
            if (col_kind < 0 || col_n < 0 || col_method < 0 || col_k < 0 || col_status < 0 ||
                col_fid < 0)
                throw ConfigError("crossover: input is not a bench-er CSV (missing columns)");
            continue;
        }
        const std::size_t needed = static_cast<std::size_t>(std::max({col_kind, col_n, col_method,
                                                                      col_k, col_status, col_fid}));
        if (fields.size() <= needed) continue;
        if (fields[col_kind] != "row" || fields[col_status] != "ok") continue;
        int n = 0, k = 0;
        double fid = 0.0;
        try {
            n = std::stoi(fields[col_n]);
            k = std::stoi(fields[col_k]);
            fid = std::stod(fields[col_fid]);
        } catch (const std::exception&) {
            throw ConfigError("crossover: malformed bench row: " + line);
        }
        const std::string& method = fields[col_method];
        if (method == "qaoa") {
            qaoa_acc[n].first += fid;
            qaoa_acc[n].second += 1;
        } else if (method == "qse" && k == cfg.cross_k) {
            qse_acc[n].first += fid;
            qse_acc[n].second += 1;
        }
    }
    if (header.empty()) throw ConfigError("crossover: input has no header line");
    if (qaoa_acc.size() < 3 || qse_acc.size() < 3)
        throw ConfigError("crossover: insufficient rows; need successful rows at >= 3 graph sizes "
                          "for both qaoa and qse k=" +
                          std::to_string(cfg.cross_k));

    std::vector<std::pair<double, double>> qaoa_points, qse_points;
    for (const auto& [n, acc] : qaoa_acc)
        qaoa_points.emplace_back(static_cast<double>(n), acc.first / acc.second);
    for (const auto& [n, acc] : qse_acc)
        qse_points.emplace_back(static_cast<double>(n), acc.first / acc.second);

    const FermiDiracFit fit_qaoa = fit_fermi_dirac(qaoa_points);
    const FermiDiracFit fit_qse = fit_fermi_dirac(qse_points);
    const std::optional<int> n_star = crossover_size(fit_qaoa, fit_qse, cfg.cross_k, cfg.rho, cfg.bound);

    json j = document_header(cfg);
    j["input_hash"] = fnv1a_hex(csv_text);
    json points;
    json pa = json::array(), pq = json::array();
    for (const auto& [n, f] : qaoa_points) pa.push_back(json::array({n, f}));
    for (const auto& [n, f] : qse_points) pq.push_back(json::array({n, f}));
    points["qaoa"] = pa;
    points["qse"] = pq;
    j["points"] = points;
    j["fit_qaoa"] = fit_json(fit_qaoa);
    j["fit_qse"] = fit_json(fit_qse);
    json cross;
    cross["found"] = n_star.has_value();
    if (n_star)
        cross["n_star"] = *n_star;
    else
        cross["message"] = "no crossover in bound";
    cross["bound"] = cfg.bound;
    j["crossover"] = cross;

    // Measured (not fitted) fidelity gain against the kernel-cost ratio at
    // each size present in both curves; f_scale rescales the cost side.
    json gains = json::array();
    for (const auto& [n, fq] : qse_acc) {
        const auto it = qaoa_acc.find(n);
        if (it == qaoa_acc.end()) continue;
        const double f_qse = fq.first / fq.second;
        const double f_qaoa = it->second.first / it->second.second;
        const double cost = 2.0 * cfg.cross_k * std::pow(std::sqrt(cfg.rho) * n, 3) * cfg.f_scale;
        json row;
        row["n"] = n;
        row["gain"] = f_qse / f_qaoa;
        row["cost_ratio"] = cost;
        row["favourable"] = f_qse / f_qaoa > cost;
        gains.push_back(row);
    }
    j["measured_gain"] = gains;
    return dump(j);
}

std::string cmd_crossover(const RunConfig& cfg) {
    if (cfg.bench_file.empty()) throw ConfigError("crossover: --bench FILE is required");
    std::ifstream in(cfg.bench_file, std::ios::binary);
    if (!in) throw ConfigError("cannot open bench CSV: " + cfg.bench_file);
    std::ostringstream buf;
    buf << in.rdbuf();
    return cmd_crossover_from_text(cfg, buf.str());
}

int run_cli(int argc, const char* const* argv) {
    RunConfig cfg;
    CLI::App app{"QAOA + quantum-subspace-expansion toolkit for maximum independent set"};
    app.set_config("--config", "", "flat key=value file mirroring the flags; flags override it");
    app.add_option("command", cfg.command, "solve | bench-er | resources | crossover | oracle")
        ->required()
        ->check(CLI::IsMember({"solve", "bench-er", "resources", "crossover", "oracle"}));
    app.add_option("--graph", cfg.graph_file, "edge-list graph file");
    app.add_option("--er", cfg.er_spec, "random graph spec N,RHO,SEED");
    app.add_option("--layers", cfg.layers, "QAOA circuit depth")->check(CLI::PositiveNumber);
    app.add_option("--starts-per-layer", cfg.starts_per_layer, "optimizer multi-starts per layer")
        ->check(CLI::PositiveNumber);
    app.add_option("--tolerance", cfg.tolerance, "optimizer convergence tolerance");
    app.add_option("--max-evals", cfg.max_evals, "optimizer evaluation budget per layer")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", cfg.seed, "base RNG seed");
    app.add_option("--min-overlap", cfg.min_overlap, "ground-manifold overlap required of QAOA");
    app.add_option("--max-seed-attempts", cfg.max_seed_attempts, "re-seed attempts for QAOA")
        ->check(CLI::PositiveNumber);
    app.add_option("--k-list", cfg.k_list, "generator counts, comma separated")->delimiter(',');
    app.add_option("--epsilon-cut", cfg.epsilon_cut, "overlap-eigenvalue truncation threshold");
    app.add_option("--kernel-mode", cfg.kernel_mode, "kernel matrix elements: exact | sampled")
        ->check(CLI::IsMember({"exact", "sampled"}));
    app.add_option("--shots", cfg.shots, "shots per kernel entry in sampled mode");
    app.add_option("--out", cfg.out_path, "output file (default stdout)");
    app.add_option("--format", cfg.format, "output format where applicable: json | csv")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--top-m", cfg.top_m, "probability-table size")->check(CLI::PositiveNumber);
    app.add_option("--n-min", cfg.n_min, "bench: smallest graph size");
    app.add_option("--n-max", cfg.n_max, "bench: largest graph size");
    app.add_option("--graphs-per-size", cfg.graphs_per_size, "bench: instances per size")
        ->check(CLI::PositiveNumber);
    app.add_option("--rho", cfg.rho, "edge density for --er-less commands (bench, resources, crossover)");
    app.add_option("--jobs", cfg.jobs, "bench: worker threads")->check(CLI::PositiveNumber);
    app.add_option("--n", cfg.res_n, "resources: problem size N");
    app.add_option("--l-prime", cfg.l_prime, "resources: retained QAOA depth");
    app.add_option("--epsilon", cfg.epsilon, "resources: rotation synthesis accuracy");
    app.add_option("--p", cfg.stencil_p, "resources: finite-difference order");
    app.add_option("--h2", cfg.h2, "resources: squared-Hamiltonian norm scale");
    app.add_option("--bench", cfg.bench_file, "crossover: bench-er CSV input");
    app.add_option("--k", cfg.cross_k, "crossover: generator count to read from the CSV");
    app.add_option("--f-scale", cfg.f_scale, "crossover: kernel-cost multiplier");
    app.add_option("--bound", cfg.bound, "crossover: largest size scanned")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        std::string doc;
        if (cfg.command == "solve")
            doc = cmd_solve(cfg);
        else if (cfg.command == "bench-er")
            doc = cmd_bench_er(cfg);
        else if (cfg.command == "resources")
            doc = cmd_resources(cfg);
        else if (cfg.command == "crossover")
            doc = cmd_crossover(cfg);
        else
            doc = cmd_oracle(cfg);
        if (cfg.out_path.empty()) {
            std::cout << doc;
        } else {
            std::ofstream out(cfg.out_path, std::ios::binary);
            if (!out) throw ConfigError("cannot open output file: " + cfg.out_path);
            out << doc;
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 3;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}

}  // namespace qsemis
