#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qsemis/graph.hpp"

namespace qsemis {

// Diagonal of the independent-set cost operator in the computational basis.
// Entry x holds  -|x| + (number of edges with both endpoints inside x),
// an exact integer stored as double.  The minimum equals minus the maximum
// independent-set size; the all-zeros entry is 0.
struct DiagonalOperator {
    int n = 0;
    std::vector<double> values;
};

// The same operator written over Pauli-Z strings:
//   constant + sum_i z[i] Z_i + sum_(i,j) zz[e] Z_i Z_j ,
// one Z term per vertex and one ZZ term per edge (z coefficients may vanish
// on degree-2 vertices; the term is kept so the decomposition stays aligned
// with the graph structure).  All coefficients are exact quarter-integers.
struct PauliDecomposition {
    int n = 0;
    double constant = 0.0;
    std::vector<double> z;
    std::vector<std::pair<int, int>> zz_edges;
    std::vector<double> zz;

    // Number of Pauli strings (identity excluded): n + |E|.
    int term_count() const { return n + static_cast<int>(zz.size()); }
    // Sum of |coefficients| over the non-identity strings.
    double one_norm() const;
};

// Ground-state summary of a diagonal operator: the minimum value and every
// basis index attaining it (ascending).
struct GroundManifold {
    double emin = 0.0;
    std::vector<std::uint64_t> indices;
};

// Builds the 2^n cost diagonal.  Throws InfeasibleError when n > max_n.
DiagonalOperator cost_diagonal(const Graph& g, int max_n = kMaxDenseVertices);

// Exact Pauli-string form of the cost operator.
PauliDecomposition pauli_terms(const Graph& g);

// Evaluates the Pauli form at a basis state (bit i of x = vertex i; the Z_i
// eigenvalue is +1 for bit 0 and -1 for bit 1).  Exact in double arithmetic.
double pauli_value(const PauliDecomposition& p, std::uint64_t x);

// Minimum diagonal entry together with all minimizing indices.
GroundManifold ground_manifold(const DiagonalOperator& d);

}  // namespace qsemis
