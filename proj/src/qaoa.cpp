#include "qsemis/qaoa.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qsemis/errors.hpp"
#include "qsemis/minimize.hpp"

namespace qsemis {

StateVector qaoa_state(const DiagonalOperator& d, const std::vector<double>& gammas,
                       const std::vector<double>& betas) {
    if (gammas.size() != betas.size())
        throw ConfigError("qaoa_state: gamma and beta lists have different lengths");
    StateVector s = plus_state(d.n);
    for (std::size_t l = 0; l < gammas.size(); ++l) {
        apply_cost_phase_inplace(s, d, gammas[l]);
        apply_mixer_inplace(s, betas[l]);
    }
    return s;
}

double qaoa_cost(const DiagonalOperator& d, const std::vector<double>& gammas,
                 const std::vector<double>& betas) {
    return expect_diagonal(qaoa_state(d, gammas, betas), d);
}

QaoaResult optimize_layerwise(const DiagonalOperator& d, int layers, const OptimizerConfig& opt,
                              std::uint64_t seed) {
    if (layers < 1) throw ConfigError("optimize_layerwise: need at least one layer");
    if (opt.starts_per_layer < 1)
        throw ConfigError("optimize_layerwise: need at least one start per layer");

    const double pi = M_PI;
    const std::vector<double> lower{0.0, 0.0};
    const std::vector<double> upper{pi, pi};
    MinimizeOptions mopt;
    mopt.tolerance = opt.tolerance;
    mopt.grad_step = 1e-6;
    mopt.max_evals = std::max(10, opt.max_evals_per_layer / opt.starts_per_layer);

    QaoaResult result;
    StateVector prefix = plus_state(d.n);
    for (int layer = 1; layer <= layers; ++layer) {
        auto layer_cost = [&](const std::vector<double>& p) {
            StateVector s = apply_cost_phase(prefix, d, p[0]);
            apply_mixer_inplace(s, p[1]);
            return expect_diagonal(s, d);
        };

        double best_cost = 0.0;
        std::vector<double> best_angles{0.0, 0.0};
        for (int start = 0; start < opt.starts_per_layer; ++start) {
            std::vector<double> x0{0.0, 0.0};
            if (start > 0) {
                std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(layer) * 256 +
                                                          static_cast<std::uint64_t>(start)));
                x0[0] = static_cast<double>(rng() >> 11) * 0x1p-53 * pi;
                x0[1] = static_cast<double>(rng() >> 11) * 0x1p-53 * pi;
            }
            const MinimizeResult r = minimize_bounded(layer_cost, x0, lower, upper, mopt);
            if (start == 0 || r.value < best_cost) {
                best_cost = r.value;
                best_angles = r.x;
            }
        }

        result.gammas.push_back(best_angles[0]);
        result.betas.push_back(best_angles[1]);
        result.cost_by_depth.push_back(best_cost);
        apply_cost_phase_inplace(prefix, d, best_angles[0]);
        apply_mixer_inplace(prefix, best_angles[1]);
    }

    result.l_prime = select_depth(result.cost_by_depth);
    const std::vector<double> g(result.gammas.begin(),
                                result.gammas.begin() + result.l_prime);
    const std::vector<double> b(result.betas.begin(), result.betas.begin() + result.l_prime);
    result.state = qaoa_state(d, g, b);
    return result;
}

int select_depth(const std::vector<double>& cost_by_depth) {
    if (cost_by_depth.empty()) throw ConfigError("select_depth: empty cost record");
    const auto it = std::min_element(cost_by_depth.begin(), cost_by_depth.end());
    return static_cast<int>(it - cost_by_depth.begin()) + 1;
}

}  // namespace qsemis
