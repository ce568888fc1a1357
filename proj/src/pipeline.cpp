#include "qsemis/pipeline.hpp"

#include <cmath>
#include <utility>

#include "qsemis/errors.hpp"

namespace qsemis {

namespace {

// Norm of (H - E S) f projected onto the span of the solution columns.
double projected_residual(const Kernels& k, const SubspaceSolution& sol, int j,
                          const std::vector<cplx>& f) {
    const std::vector<cplx> hf = matvec(k.h, f);
    const std::vector<cplx> sf = matvec(k.s, f);
    std::vector<cplx> r(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        r[i] = hf[i] - sol.energies[static_cast<std::size_t>(j)] * sf[i];
    double acc = 0.0;
    for (int c = 0; c < sol.weights.cols; ++c) {
        cplx ov(0.0, 0.0);
        for (std::size_t i = 0; i < r.size(); ++i)
            ov += std::conj(sol.weights(static_cast<int>(i), c)) * r[i];
        acc += std::norm(ov);
    }
    return std::sqrt(acc);
}

}  // namespace

PipelineResult run_pipeline(const Graph& g, const PipelineConfig& cfg) {
    if (cfg.k_list.empty()) throw ConfigError("pipeline needs at least one generator count");
    if (cfg.max_seed_attempts < 1) throw ConfigError("pipeline needs at least one seed attempt");

    PipelineResult out;
    out.oracle = brute_force_mis(g);
    const DiagonalOperator d = cost_diagonal(g);
    out.manifold = ground_manifold(d);

    // Layer-wise QAOA with re-seeding: walk consecutive seeds until the
    // ground-manifold overlap clears the threshold, keeping the best attempt.
    bool have_best = false;
    for (int attempt = 0; attempt < cfg.max_seed_attempts; ++attempt) {
        const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(attempt);
        QaoaResult r = optimize_layerwise(d, cfg.layers, cfg.optimizer, seed);
        const double overlap = projector_fidelity(r.state, out.manifold.indices);
        if (!have_best || overlap > out.qaoa_overlap) {
            out.qaoa = std::move(r);
            out.qaoa_overlap = overlap;
            out.seed_used = seed;
            have_best = true;
        }
        out.seed_attempts = attempt + 1;
        if (out.qaoa_overlap >= cfg.min_overlap) break;
    }
    out.qaoa_metrics = evaluate_metrics(out.qaoa.state, d, out.oracle);

    for (int k : cfg.k_list) {
        const TimeGrid grid = generator_times(k);
        const ShotModel m{cfg.kernel_mode, static_cast<long long>(cfg.shots),
                          derive_seed(out.seed_used, 65536 + static_cast<std::uint64_t>(k))};
        const Kernels kernels = build_kernels(out.qaoa.state, d, grid, m);
        const SubspaceSolution sol = solve_truncated(kernels, cfg.epsilon_cut);

        QseRun run;
        run.k = k;
        run.energy = sol.energies.front();
        run.retained = sol.retained;
        run.ground_weights.resize(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i)
            run.ground_weights[static_cast<std::size_t>(i)] = sol.weights(i, 0);

        const std::vector<cplx> sf = matvec(kernels.s, run.ground_weights);
        cplx fsf(0.0, 0.0);
        for (std::size_t i = 0; i < sf.size(); ++i)
            fsf += std::conj(run.ground_weights[i]) * sf[i];
        run.norm_defect = std::abs(fsf.real() - 1.0);
        run.residual = projected_residual(kernels, sol, 0, run.ground_weights);
        run.reencode = reencode_probability(run.ground_weights, kernels);

        const AssembledState a = assemble_state(out.qaoa.state, d, grid, run.ground_weights);
        run.state = a.state;
        run.metrics = evaluate_metrics(run.state, d, out.oracle);
        out.qse.push_back(std::move(run));
    }
    return out;
}

}  // namespace qsemis
