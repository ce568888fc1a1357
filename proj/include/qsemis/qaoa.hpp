#pragma once

#include <cstdint>
#include <vector>

#include "qsemis/hamiltonian.hpp"
#include "qsemis/simulator.hpp"

namespace qsemis {

struct OptimizerConfig {
    int starts_per_layer = 8;       // deterministic multi-starts; start 0 is (0, 0)
    double tolerance = 1e-8;        // per-step cost improvement threshold
    int max_evals_per_layer = 200;  // evaluation budget shared across the starts of a layer
};

// Output of the layer-wise optimization.  Angles are in [0, pi]; depth
// indices are 1-based.  `state` is rebuilt from the first l_prime angle
// pairs, so it matches a fresh simulation of the truncated circuit.
struct QaoaResult {
    std::vector<double> gammas;
    std::vector<double> betas;
    std::vector<double> cost_by_depth;  // cost reached after optimizing each layer
    int l_prime = 0;                    // retained depth: argmin cost, ties toward smaller
    StateVector state;
};

// Alternating ansatz applied to the uniform superposition: per layer, the
// cost phase with angle gamma_l, then the transverse-field mixer with beta_l.
StateVector qaoa_state(const DiagonalOperator& d, const std::vector<double>& gammas,
                       const std::vector<double>& betas);

// Expectation of the cost operator in qaoa_state(d, gammas, betas).
double qaoa_cost(const DiagonalOperator& d, const std::vector<double>& gammas,
                 const std::vector<double>& betas);

// Optimizes one layer at a time, freezing all earlier layers, then retains
// the depth with the lowest recorded cost.  Deterministic given (d, layers,
// opt, seed).  Throws NumericalError if the cost ever becomes non-finite.
QaoaResult optimize_layerwise(const DiagonalOperator& d, int layers, const OptimizerConfig& opt,
                              std::uint64_t seed);

// Smallest 1-based index attaining the minimum recorded cost.
int select_depth(const std::vector<double>& cost_by_depth);

}  // namespace qsemis
