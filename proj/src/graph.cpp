#include "qsemis/graph.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "qsemis/errors.hpp"

namespace qsemis {

double Graph::density() const {
    if (n < 2) return 0.0;
    return static_cast<double>(edges.size()) / (0.5 * n * (n - 1));
}

namespace {

// Strips a trailing '\r' (CRLF input) and anything after '#'.
std::string strip_line(std::string line) {
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
        line.pop_back();
    return line;
}

[[noreturn]] void parse_fail(int line_no, const std::string& line, const std::string& why) {
    std::ostringstream os;
    os << "graph parse error at line " << line_no << " (\"" << line << "\"): " << why;
    throw ConfigError(os.str());
}

}  // namespace

Graph parse_graph(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    bool have_n = false;
    Graph g;
    std::set<std::pair<int, int>> seen;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = strip_line(raw);
        std::istringstream fields(line);
        if (!have_n) {
            long n = -1;
            if (!(fields >> n)) continue;  // blank / comment line before the header
            std::string extra;
            if (fields >> extra) parse_fail(line_no, raw, "expected a single vertex count");
            if (n < 1) parse_fail(line_no, raw, "vertex count must be >= 1");
            g.n = static_cast<int>(n);
            have_n = true;
            continue;
        }
        long i = -1, j = -1;
        if (!(fields >> i)) continue;
        if (!(fields >> j)) parse_fail(line_no, raw, "expected two endpoints");
        std::string extra;
        if (fields >> extra) parse_fail(line_no, raw, "expected exactly two endpoints");
        if (i < 0 || j < 0 || i >= g.n || j >= g.n)
            parse_fail(line_no, raw, "endpoint out of range");
        if (i == j) parse_fail(line_no, raw, "self-loop");
        const int a = static_cast<int>(std::min(i, j));
        const int b = static_cast<int>(std::max(i, j));
        if (!seen.insert({a, b}).second) parse_fail(line_no, raw, "duplicate edge");
    }
    if (!have_n) throw ConfigError("graph parse error: missing vertex-count line");
    g.edges.assign(seen.begin(), seen.end());
    return g;
}

Graph load_graph_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open graph file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_graph(buf.str());
}

std::string serialize_graph(const Graph& g) {
    std::ostringstream os;
    os << g.n << "\n";
    for (const auto& [i, j] : g.edges) os << i << " " << j << "\n";
    return os.str();
}

std::string graph_hash(const Graph& g) {
    const std::string bytes = serialize_graph(g);
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a 64-bit offset basis
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
    return std::string(out);
}

Graph generate_er(int n, double rho, std::uint64_t seed) {
    if (n < 1) throw ConfigError("generate_er: vertex count must be >= 1");
    if (!(rho >= 0.0 && rho <= 1.0)) throw ConfigError("generate_er: density must be in [0, 1]");
    Graph g;
    g.n = n;
    std::mt19937_64 rng(seed);
    constexpr double kInv53 = 1.0 / 9007199254740992.0;  // 2^-53
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double u = static_cast<double>(rng() >> 11) * kInv53;
            if (u < rho) g.edges.emplace_back(i, j);
        }
    }
    return g;
}

bool is_independent(const Graph& g, std::uint64_t x) {
    if (g.n < 64 && (x >> g.n) != 0)
        throw ConfigError("is_independent: bitmask has bits beyond the vertex count");
    for (const auto& [i, j] : g.edges)
        if (((x >> i) & 1ULL) && ((x >> j) & 1ULL)) return false;
    return true;
}

MisResult brute_force_mis(const Graph& g, int max_n) {
    if (g.n > max_n) {
        std::ostringstream os;
        os << "brute_force_mis: graph with " << g.n << " vertices exceeds the exhaustive-search bound " << max_n;
        throw InfeasibleError(os.str());
    }
    std::vector<std::uint64_t> adj(g.n, 0);
    for (const auto& [i, j] : g.edges) {
        adj[i] |= 1ULL << j;
        adj[j] |= 1ULL << i;
    }
    MisResult result;
    const std::uint64_t total = 1ULL << g.n;
    for (std::uint64_t x = 0; x < total; ++x) {
        const int pop = std::popcount(x);
        if (pop < result.size) continue;
        bool ok = true;
        for (std::uint64_t rest = x; rest != 0;) {
            const int i = std::countr_zero(rest);
            rest &= rest - 1;
            if (adj[i] & x) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        if (pop > result.size) {
            result.size = pop;
            result.solutions.clear();
        }
        result.solutions.push_back(x);
    }
    return result;
}

}  // namespace qsemis
