#pragma once

#include <cstdint>
#include <vector>

#include "qsemis/graph.hpp"
#include "qsemis/hamiltonian.hpp"
#include "qsemis/qaoa.hpp"
#include "qsemis/qse.hpp"
#include "qsemis/simulator.hpp"

namespace qsemis {

/// Everything needed to run oracle -> QAOA -> subspace expansion on one graph.
struct PipelineConfig {
    int layers = 20;
    std::vector<int> k_list = {1, 2, 4, 8};
    double epsilon_cut = kDefaultEpsilonCut;
    KernelMode kernel_mode = KernelMode::exact;
    std::uint64_t shots = 1'000'000;
    std::uint64_t seed = 1;
    OptimizerConfig optimizer;
    /// Ground-manifold overlap the QAOA stage must reach; below it the run is
    /// repeated with the next seed, keeping the best attempt.
    double min_overlap = 0.2;
    int max_seed_attempts = 6;
};

/// Result of one subspace expansion at a fixed generator count.
struct QseRun {
    int k = 0;
    double energy = 0.0;
    Metrics metrics;
    double reencode = 0.0;
    int retained = 0;
    /// |f^dag S f - 1| of the ground weight vector.
    double norm_defect = 0.0;
    /// Norm of the generalized residual projected onto the retained subspace.
    double residual = 0.0;
    std::vector<cplx> ground_weights;
    StateVector state;
};

struct PipelineResult {
    MisResult oracle;
    GroundManifold manifold;
    QaoaResult qaoa;
    Metrics qaoa_metrics;
    double qaoa_overlap = 0.0;
    std::uint64_t seed_used = 0;
    int seed_attempts = 1;
    std::vector<QseRun> qse;
};

/// Runs the full chain on one graph: exact oracle, layer-wise QAOA with the
/// re-seed protocol, then kernels + truncated generalized eigensolve +
/// re-assembled state + metrics for every K in the list.
PipelineResult run_pipeline(const Graph& g, const PipelineConfig& cfg);

}  // namespace qsemis
