#include "qsemis/hamiltonian.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "qsemis/errors.hpp"

namespace qsemis {

double PauliDecomposition::one_norm() const {
    double total = 0.0;
    for (double c : z) total += std::abs(c);
    for (double c : zz) total += std::abs(c);
    return total;
}

DiagonalOperator cost_diagonal(const Graph& g, int max_n) {
    if (g.n > max_n) {
        std::ostringstream os;
        os << "cost_diagonal: graph with " << g.n << " vertices exceeds the dense bound " << max_n;
        throw InfeasibleError(os.str());
    }
    std::vector<std::uint32_t> adj(g.n, 0);
    for (const auto& [i, j] : g.edges) {
        adj[i] |= 1u << j;
        adj[j] |= 1u << i;
    }
    DiagonalOperator d;
    d.n = g.n;
    const std::uint64_t size = 1ULL << g.n;
    std::vector<std::int32_t> v(size, 0);
    // Peeling the lowest set bit i off x gives
    //   value(x) = value(x \ i) - 1 + (edges between i and the rest),
    // so the whole table fills in one pass of integer arithmetic.
    for (std::uint64_t x = 1; x < size; ++x) {
        const int i = std::countr_zero(x);
        const std::uint64_t rest = x & (x - 1);
        v[x] = v[rest] - 1 + std::popcount(adj[i] & static_cast<std::uint32_t>(rest));
    }
    d.values.assign(v.begin(), v.end());
    return d;
}

PauliDecomposition pauli_terms(const Graph& g) {
    PauliDecomposition p;
    p.n = g.n;
    std::vector<int> degree(g.n, 0);
    for (const auto& [i, j] : g.edges) {
        ++degree[i];
        ++degree[j];
    }
    p.constant = -0.5 * g.n + 0.25 * g.edge_count();
    p.z.resize(g.n);
    for (int i = 0; i < g.n; ++i) p.z[i] = 0.5 - 0.25 * degree[i];
    p.zz_edges = g.edges;
    p.zz.assign(g.edges.size(), 0.25);
    return p;
}

double pauli_value(const PauliDecomposition& p, std::uint64_t x) {
    double total = p.constant;
    for (int i = 0; i < p.n; ++i) total += p.z[i] * (((x >> i) & 1ULL) ? -1.0 : 1.0);
    for (std::size_t e = 0; e < p.zz.size(); ++e) {
        const auto& [i, j] = p.zz_edges[e];
        const double zi = ((x >> i) & 1ULL) ? -1.0 : 1.0;
        const double zj = ((x >> j) & 1ULL) ? -1.0 : 1.0;
        total += p.zz[e] * zi * zj;
    }
    return total;
}

GroundManifold ground_manifold(const DiagonalOperator& d) {
    GroundManifold gm;
    if (d.values.empty()) throw ConfigError("ground_manifold: empty diagonal");
    gm.emin = d.values[0];
    for (std::uint64_t x = 1; x < d.values.size(); ++x)
        if (d.values[x] < gm.emin) gm.emin = d.values[x];
    for (std::uint64_t x = 0; x < d.values.size(); ++x)
        if (d.values[x] == gm.emin) gm.indices.push_back(x);
    return gm;
}

}  // namespace qsemis
