#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "qsemis/bench.hpp"
#include "qsemis/cli.hpp"
#include "qsemis/errors.hpp"
#include "qsemis/estimator.hpp"
#include "qsemis/graph.hpp"
#include "qsemis/pipeline.hpp"

using json = nlohmann::json;
using namespace qsemis;

namespace {

std::string fixture(const char* name) { return std::string(FIXTURE_DIR) + "/" + name; }

RunConfig base_config(const std::string& command) {
    RunConfig cfg;
    cfg.command = command;
    return cfg;
}

int run_binary(const std::string& args) {
    const std::string cmd = std::string(CLI_BIN) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(static_cast<bool>(in));
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("resolve_graph accepts exactly one source") {
    RunConfig cfg = base_config("oracle");
    CHECK_THROWS_AS(resolve_graph(cfg), ConfigError);  // neither

    cfg.er_spec = "8,0.5,7";
    const Graph er = resolve_graph(cfg);
    CHECK(er.n == 8);
    CHECK(graph_hash(er) == graph_hash(generate_er(8, 0.5, 7)));

    cfg.graph_file = fixture("single_edge.edges");
    CHECK_THROWS_AS(resolve_graph(cfg), ConfigError);  // both

    cfg.er_spec.clear();
    const Graph g = resolve_graph(cfg);
    CHECK(g.n == 2);
    CHECK(g.edge_count() == 1);
}

TEST_CASE("resolve_graph rejects malformed er specs") {
    RunConfig cfg = base_config("oracle");
    for (const char* bad : {"8,0.5", "8,0.5,7,9", "x,0.5,7", "8,rho,7", "8,0.5,s", "8,,7", ""}) {
        cfg.er_spec = bad;
        CHECK_THROWS_AS(resolve_graph(cfg), ConfigError);
    }
    cfg.er_spec = "8,1.5,7";  // density out of range caught downstream
    CHECK_THROWS_AS(resolve_graph(cfg), ConfigError);
}

TEST_CASE("run_pipeline validates its configuration") {
    const Graph g = load_graph_file(fixture("single_edge.edges"));
    PipelineConfig pc;
    pc.k_list.clear();
    CHECK_THROWS_AS(run_pipeline(g, pc), ConfigError);
    pc.k_list = {1};
    pc.max_seed_attempts = 0;
    CHECK_THROWS_AS(run_pipeline(g, pc), ConfigError);
}

TEST_CASE("pipeline invariants hold on the cube fixture") {
    const Graph g = load_graph_file(fixture("g3.edges"));
    PipelineConfig pc;
    const PipelineResult res = run_pipeline(g, pc);

    CHECK(res.oracle.size == 4);
    CHECK(res.manifold.emin == -4.0);
    CHECK(res.qaoa_overlap >= pc.min_overlap);
    CHECK(res.seed_used == pc.seed);
    CHECK(res.seed_attempts == 1);
    REQUIRE(res.qse.size() == 4);

    double prev_fid = 0.0;
    for (const QseRun& run : res.qse) {
        // Variational sandwich: never above the input state, never below the
        // exact ground energy.
        CHECK(run.energy <= res.qaoa_metrics.energy + 1e-9);
        CHECK(run.energy >= res.manifold.emin - 1e-9);
        CHECK(run.norm_defect <= 1e-8);
        CHECK(run.residual <= 1e-7);
        CHECK(run.metrics.fidelity >= prev_fid - 1e-9);
        CHECK(run.reencode > 0.0);
        CHECK(run.reencode <= 1.0 + 1e-12);
        CHECK(static_cast<int>(run.ground_weights.size()) == run.k);
        prev_fid = run.metrics.fidelity;
    }
    CHECK(res.qse.back().metrics.fidelity >= 0.98);
}

TEST_CASE("pipeline works in sampled-kernel mode") {
    const Graph g = load_graph_file(fixture("g3.edges"));
    PipelineConfig pc;
    pc.k_list = {4};
    pc.kernel_mode = KernelMode::sampled;
    pc.shots = 200000;
    const PipelineResult res = run_pipeline(g, pc);
    REQUIRE(res.qse.size() == 1);
    CHECK(res.qse[0].retained >= 1);
    CHECK(std::isfinite(res.qse[0].energy));
    CHECK(res.qse[0].residual <= 1e-7);  // residual of the sampled pencil itself

    const PipelineResult again = run_pipeline(g, pc);
    CHECK(again.qse[0].energy == res.qse[0].energy);  // same seed, same noise
}

TEST_CASE("bench sweep is deterministic and fully ordered") {
    BenchConfig bc;
    bc.n_min = 2;
    bc.n_max = 4;
    bc.graphs_per_size = 3;
    bc.pipeline.k_list = {1, 2};

    const BenchResult serial = run_bench(bc);
    REQUIRE(serial.rows.size() == 3u * 3u * 3u);  // sizes x instances x (qaoa + 2 K rows)
    for (std::size_t i = 1; i < serial.rows.size(); ++i) {
        const BenchRow& a = serial.rows[i - 1];
        const BenchRow& b = serial.rows[i];
        CHECK(std::tie(a.n, a.graph_seed, a.method, a.k) <= std::tie(b.n, b.graph_seed, b.method, b.k));
    }
    for (const BenchRow& row : serial.rows) CHECK(row.ok);

    BenchConfig parallel = bc;
    parallel.jobs = 3;
    const std::string csv_serial = bench_csv(serial);
    const std::string csv_parallel = bench_csv(run_bench(parallel));
    // Data rows agree; only the echoed jobs line may differ.
    auto strip_jobs = [](const std::string& text) {
        std::istringstream in(text);
        std::string line, out;
        while (std::getline(in, line))
            if (line.rfind("# jobs,", 0) != 0) out += line + "\n";
        return out;
    };
    CHECK(strip_jobs(csv_serial) == strip_jobs(csv_parallel));
    CHECK(bench_csv(run_bench(bc)) == csv_serial);  // same config twice: identical bytes

    const auto points = mean_fidelity_by_size(serial, "qse", 2);
    REQUIRE(points.size() == 3);
    CHECK(points[0].first == 2.0);
    CHECK(points[2].first == 4.0);
}

TEST_CASE("bench records partial failures without aborting the sweep") {
    BenchConfig bc;
    bc.n_min = 2;
    bc.n_max = 2;
    bc.graphs_per_size = 2;
    bc.pipeline.k_list = {1};
    bc.pipeline.epsilon_cut = 10.0;  // truncation removes everything -> per-row failure
    const BenchResult res = run_bench(bc);
    REQUIRE(res.rows.size() == 4);
    for (const BenchRow& row : res.rows) {
        CHECK_FALSE(row.ok);
        CHECK_FALSE(row.error.empty());
    }
    const std::string csv = bench_csv(res);
    CHECK(csv.find("error:") != std::string::npos);
    CHECK(csv.find("\nmean,") == std::string::npos);  // nothing to aggregate
}

TEST_CASE("bench validates its configuration") {
    BenchConfig bc;
    bc.n_min = 0;
    CHECK_THROWS_AS(run_bench(bc), ConfigError);
    bc = {};
    bc.n_max = 1;
    CHECK_THROWS_AS(run_bench(bc), ConfigError);
    bc = {};
    bc.rho = 1.5;
    CHECK_THROWS_AS(run_bench(bc), ConfigError);
    bc = {};
    bc.jobs = 0;
    CHECK_THROWS_AS(run_bench(bc), ConfigError);
    bc = {};
    bc.n_max = 30;
    CHECK_THROWS_AS(run_bench(bc), ConfigError);
}

TEST_CASE("oracle command emits a faithful summary document") {
    RunConfig cfg = base_config("oracle");
    cfg.graph_file = fixture("single_edge.edges");
    const json doc = json::parse(cmd_oracle(cfg));

    CHECK(doc.at("schema_version") == 1);
    CHECK(doc.at("artifact_version") == kArtifactVersion);
    CHECK(doc.at("command") == "oracle");
    CHECK(doc.at("config").at("graph") == cfg.graph_file);
    CHECK(doc.at("config").at("seed") == 1);
    CHECK(doc.at("graph").at("n") == 2);
    CHECK(doc.at("graph").at("hash") == graph_hash(load_graph_file(cfg.graph_file)));
    CHECK(doc.at("oracle").at("mis_size") == 1);
    CHECK(doc.at("oracle").at("solutions") == json::array({1, 2}));
    CHECK(doc.at("oracle").at("emin") == -1.0);
    CHECK(doc.at("oracle").at("ground_manifold") == json::array({1, 2, 3}));
}

TEST_CASE("solve command reproduces the cube pipeline") {
    RunConfig cfg = base_config("solve");
    cfg.graph_file = fixture("g3.edges");
    const std::string text = cmd_solve(cfg);
    CHECK(cmd_solve(cfg) == text);  // byte-identical rerun in exact mode

    const json doc = json::parse(text);
    CHECK(doc.at("oracle").at("mis_size") == 4);
    CHECK(doc.at("qaoa").at("ground_overlap").get<double>() >= 0.2);
    CHECK(doc.at("qaoa").at("l_prime").get<int>() >= 1);
    REQUIRE(doc.at("qse").size() == 4);
    const json& k8 = doc.at("qse").at(3);
    CHECK(k8.at("k") == 8);
    CHECK(k8.at("metrics").at("fidelity").get<double>() >= 0.98);
    const double emin = doc.at("oracle").at("emin").get<double>();
    const double qaoa_energy = doc.at("qaoa").at("metrics").at("energy").get<double>();
    for (const json& run : doc.at("qse")) {
        CHECK(run.at("energy").get<double>() <= qaoa_energy + 1e-9);
        CHECK(run.at("energy").get<double>() >= emin - 1e-9);
        CHECK(run.at("norm_defect").get<double>() <= 1e-8);
        CHECK(run.at("residual").get<double>() <= 1e-7);
    }

    const json& tables = doc.at("probability_tables");
    REQUIRE(tables.at("qaoa").size() == static_cast<std::size_t>(cfg.top_m));
    CHECK(tables.at("qse").at("k") == 8);
    double prev = 1.0;
    double total = 0.0;
    for (const json& row : tables.at("qse").at("entries")) {
        const double p = row.at("probability").get<double>();
        CHECK(p <= prev + 1e-15);
        CHECK(row.at("bitstring").get<std::string>().size() == 8);
        prev = p;
        total += p;
    }
    CHECK(total <= 1.0 + 1e-9);
    // The two maximum-independent-set bitstrings dominate the filtered state.
    CHECK(tables.at("qse").at("entries").at(0).at("probability").get<double>() > 0.4);
}

TEST_CASE("solve command solves the edgeless graph exactly") {
    RunConfig cfg = base_config("solve");
    cfg.er_spec = "3,0,1";  // density zero: no edges
    cfg.k_list = {1, 2};
    const json doc = json::parse(cmd_solve(cfg));
    CHECK(doc.at("oracle").at("mis_size") == 3);
    CHECK(doc.at("oracle").at("ground_manifold") == json::array({7}));
    CHECK(doc.at("qaoa").at("metrics").at("fidelity").get<double>() >= 0.9999);
    for (const json& run : doc.at("qse"))
        CHECK(run.at("metrics").at("fidelity").get<double>() >= 0.9999);
}

TEST_CASE("resources command echoes inputs and matches the cost model") {
    RunConfig cfg = base_config("resources");
    SUBCASE("csv") {
        cfg.format = "csv";
        const std::string csv = cmd_resources(cfg);
        CHECK(csv.find("method,n,rho,l_prime,epsilon,p,h2,cnot,t_gates,toffoli,ancillas\n") !=
              std::string::npos);
        CHECK(csv.find("rte,10,0.5,10,0.0009765625,2,1,600,22000,0,1\n") != std::string::npos);
        CHECK(csv.find("pauli,10,0.5,10,") != std::string::npos);
        CHECK(csv.find("lcu,10,0.5,10,") != std::string::npos);
    }
    SUBCASE("json") {
        const json doc = json::parse(cmd_resources(cfg));
        CHECK(doc.at("inputs").at("n") == 10);
        CHECK(doc.at("inputs").at("epsilon").get<double>() == 0.0009765625);
        REQUIRE(doc.at("rows").size() == 3);
        const ResourceCount rte = method_cost(CostMethod::rte, 10, 0.5, 10, 0.0009765625, 2, 1.0);
        CHECK(doc.at("rows").at(1).at("method") == "rte");
        CHECK(doc.at("rows").at(1).at("cnot").get<double>() == rte.cnot);
        CHECK(doc.at("rows").at(1).at("t_gates").get<double>() == rte.t_gates);
        const ResourceCount lcu = method_cost(CostMethod::lcu, 10, 0.5, 10, 0.0009765625, 2, 1.0);
        CHECK(doc.at("rows").at(2).at("ancillas").get<double>() == lcu.ancillas);
    }
}

namespace {

// Bench-like CSV whose per-size fidelities follow exact logistic curves.
std::string synthetic_bench_csv(const FermiDiracFit& qaoa, const FermiDiracFit& qse, int k,
                                int n_min, int n_max) {
    std::string csv = "kind,n,graph_seed,method,k,status,energy,approx_ratio,fidelity,"
                      "hamming_error,parity_error\n";
    char buf[256];
    for (int n = n_min; n <= n_max; ++n) {
        std::snprintf(buf, sizeof buf, "row,%d,1,qaoa,0,ok,-1,0.5,%.17g,0,0\n", n,
                      fermi_dirac(qaoa, n));
        csv += buf;
        std::snprintf(buf, sizeof buf, "row,%d,1,qse,%d,ok,-1,0.9,%.17g,0,0\n", n, k,
                      fermi_dirac(qse, n));
        csv += buf;
    }
    return csv;
}

}  // namespace

TEST_CASE("crossover command fits synthetic curves and finds the scan oracle's size") {
    FermiDiracFit qaoa_truth;
    qaoa_truth.alpha = 0.3;
    qaoa_truth.beta = 0.9;
    FermiDiracFit qse_truth;
    qse_truth.alpha = 0.05;
    qse_truth.beta = 0.99;

    RunConfig cfg = base_config("crossover");
    cfg.cross_k = 8;
    cfg.rho = 0.5;
    const std::string csv = synthetic_bench_csv(qaoa_truth, qse_truth, 8, 2, 16);
    const json doc = json::parse(cmd_crossover_from_text(cfg, csv));

    CHECK(std::abs(doc.at("fit_qaoa").at("alpha").get<double>() - 0.3) < 0.01 * 0.3);
    CHECK(std::abs(doc.at("fit_qaoa").at("beta").get<double>() - 0.9) < 0.01 * 0.9);
    CHECK(std::abs(doc.at("fit_qse").at("alpha").get<double>() - 0.05) < 0.01 * 0.05);
    CHECK(std::abs(doc.at("fit_qse").at("beta").get<double>() - 0.99) < 0.01 * 0.99);

    REQUIRE(doc.at("crossover").at("found").get<bool>());
    const int n_star = doc.at("crossover").at("n_star").get<int>();

    // Independent scan of the gain inequality at the true parameters.
    std::optional<int> scan;
    for (int n = 2; n <= 10000; ++n) {
        const double gain = fermi_dirac(qse_truth, n) / fermi_dirac(qaoa_truth, n);
        if (gain > 2.0 * 8 * std::pow(std::sqrt(0.5) * n, 3)) {
            scan = n;
            break;
        }
    }
    REQUIRE(scan.has_value());
    CHECK(n_star == *scan);

    CHECK(doc.at("points").at("qaoa").size() == 15);
    CHECK(doc.at("measured_gain").size() == 15);
}

TEST_CASE("crossover command reports the no-crossover case") {
    FermiDiracFit same;
    same.alpha = 0.2;
    same.beta = 0.8;
    RunConfig cfg = base_config("crossover");
    const json doc = json::parse(cmd_crossover_from_text(cfg, synthetic_bench_csv(same, same, 8, 2, 10)));
    CHECK_FALSE(doc.at("crossover").at("found").get<bool>());
    CHECK(doc.at("crossover").at("message") == "no crossover in bound");
}

TEST_CASE("crossover command validates its input") {
    RunConfig cfg = base_config("crossover");
    CHECK_THROWS_AS(cmd_crossover(cfg), ConfigError);  // no --bench
    cfg.bench_file = "/nonexistent/bench.csv";
    CHECK_THROWS_AS(cmd_crossover(cfg), ConfigError);

    CHECK_THROWS_AS(cmd_crossover_from_text(cfg, ""), ConfigError);
    CHECK_THROWS_AS(cmd_crossover_from_text(cfg, "a,b,c\n1,2,3\n"), ConfigError);

    FermiDiracFit f;
    f.alpha = 0.3;
    f.beta = 0.9;
    // Only two sizes: not enough points to fit.
    CHECK_THROWS_AS(cmd_crossover_from_text(cfg, synthetic_bench_csv(f, f, 8, 2, 3)), ConfigError);
    // Rows exist but none for the requested K.
    cfg.cross_k = 16;
    CHECK_THROWS_AS(cmd_crossover_from_text(cfg, synthetic_bench_csv(f, f, 8, 2, 10)), ConfigError);
}

TEST_CASE("crossover ignores failed rows and aggregates repeats") {
    RunConfig cfg = base_config("crossover");
    cfg.cross_k = 4;
    std::string csv = "kind,n,graph_seed,method,k,status,energy,approx_ratio,fidelity,"
                      "hamming_error,parity_error\n";
    for (int n : {2, 4, 6}) {
        for (int rep = 0; rep < 2; ++rep) {
            csv += "row," + std::to_string(n) + ",1,qaoa,0,ok,-1,0.5,0.5,0,0\n";
            csv += "row," + std::to_string(n) + ",1,qse,4,ok,-1,0.9,0.5,0,0\n";
        }
        csv += "row," + std::to_string(n) + ",1,qaoa,0,error:boom,,,,,\n";
        csv += "mean," + std::to_string(n) + ",,qaoa,0,ok,-1,0.5,0.99,0,0\n";  // not a row
    }
    const json doc = json::parse(cmd_crossover_from_text(cfg, csv));
    // Flat identical curves: alpha pinned near zero, beta near 1 (halved).
    CHECK(doc.at("points").at("qaoa").size() == 3);
    for (const json& p : doc.at("points").at("qaoa")) CHECK(p.at(1).get<double>() == 0.5);
    CHECK_FALSE(doc.at("crossover").at("found").get<bool>());
}

TEST_CASE("cli binary maps outcomes to exit codes") {
    CHECK(run_binary("--help") == 0);
    CHECK(run_binary("oracle --er 2,0.5,1") == 0);
    CHECK(run_binary("") == 2);                                   // missing command
    CHECK(run_binary("bogus") == 2);                              // unknown command
    CHECK(run_binary("oracle") == 2);                             // no graph source
    CHECK(run_binary("oracle --graph /nonexistent.edges") == 2);  // unreadable file
    CHECK(run_binary("oracle --er 30,0.5,1") == 3);               // beyond the dense bound
    CHECK(run_binary("solve --er 2,0.5,1 --epsilon-cut -1 --k-list 1") == 2);
    CHECK(run_binary("solve --er 2,0.5,1 --epsilon-cut 10 --k-list 1") == 4);  // empty subspace
    CHECK(run_binary("crossover --bench /nonexistent.csv") == 2);
    CHECK(run_binary("resources --epsilon 0") == 2);  // rejected by the cost model
}

TEST_CASE("cli binary honours --out and a flat config file") {
    const std::string dir = "/tmp";
    const std::string cfg_path = dir + "/qsemis_test_cli.conf";
    const std::string out_path = dir + "/qsemis_test_cli_out.json";
    {
        std::ofstream cfg(cfg_path);
        cfg << "layers=3\nseed=2\nk-list=1,2\n";
    }
    std::remove(out_path.c_str());
    REQUIRE(run_binary("oracle --er 3,0.5,1 --config " + cfg_path + " --out " + out_path) == 0);
    const json doc = json::parse(slurp(out_path));
    CHECK(doc.at("config").at("layers") == 3);
    CHECK(doc.at("config").at("seed") == 2);
    CHECK(doc.at("config").at("k_list") == json::array({1, 2}));

    // Command-line flags override the file.
    REQUIRE(run_binary("oracle --er 3,0.5,1 --config " + cfg_path + " --layers 7 --out " + out_path) == 0);
    const json doc2 = json::parse(slurp(out_path));
    CHECK(doc2.at("config").at("layers") == 7);
    CHECK(doc2.at("config").at("seed") == 2);

    std::remove(cfg_path.c_str());
    std::remove(out_path.c_str());
}
