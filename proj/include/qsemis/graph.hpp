#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qsemis {

// Largest vertex count the dense statevector / exhaustive machinery accepts.
inline constexpr int kMaxDenseVertices = 24;

// Simple undirected graph.  Edges are stored as (i, j) with i < j, sorted
// lexicographically and free of duplicates; vertex indices are 0-based.
struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;

    int edge_count() const { return static_cast<int>(edges.size()); }
    double density() const;
};

// Result of an exact maximum-independent-set search.  `solutions` holds every
// optimal subset as a bitmask (bit i set <=> vertex i in the set), ascending.
struct MisResult {
    int size = 0;
    std::vector<std::uint64_t> solutions;

    std::size_t count() const { return solutions.size(); }
};

// Parses the edge-list format: '#' starts a comment, blank lines are ignored,
// the first data line holds the vertex count, every further data line holds
// one edge "i j".  Self-loops, duplicate edges, out-of-range endpoints and
// malformed lines raise ConfigError naming the offending line.
Graph parse_graph(const std::string& text);

// Reads a file and delegates to parse_graph.
Graph load_graph_file(const std::string& path);

// Canonical textual form (same format parse_graph accepts): vertex count,
// then edges in sorted order.  Used for hashing and fixture generation.
std::string serialize_graph(const Graph& g);

// FNV-1a over the canonical serialization, as a fixed-width hex string.
// Whitespace or edge-order differences in the input do not affect the hash.
std::string graph_hash(const Graph& g);

// Identifier of the PRNG scheme behind generate_er, recorded in outputs.
inline constexpr const char* kErRngAlgorithm = "mt19937_64/53bit";

// Erdos-Renyi G(n, rho): every pair (i, j), i < j in lexicographic order,
// is drawn independently; the pair becomes an edge when the next 53-bit
// uniform double from mt19937_64(seed) falls below rho.  Fully deterministic
// for a given (n, rho, seed) on any platform.
Graph generate_er(int n, double rho, std::uint64_t seed);

// True when no edge of g has both endpoints inside the subset bitmask x.
bool is_independent(const Graph& g, std::uint64_t x);

// Exhaustive maximum-independent-set search over all 2^n subsets.
// Throws InfeasibleError when n exceeds max_n (default kMaxDenseVertices).
MisResult brute_force_mis(const Graph& g, int max_n = kMaxDenseVertices);

}  // namespace qsemis
