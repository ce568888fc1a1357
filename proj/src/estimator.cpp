#include "qsemis/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qsemis/errors.hpp"
#include "qsemis/linalg.hpp"

namespace qsemis {

namespace {

void check_epsilon(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw ConfigError("rotation synthesis error must lie in (0, 1)");
}

// 1 / (1 + e^x) evaluated without overflow for any x.
double inv_logistic(double x) {
    if (x > 0.0) {
        const double e = std::exp(-x);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(x));
}

// log(1 + e^x), overflow-safe.
double softplus(double x) {
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

double fit_residual_for_alpha(const std::vector<std::pair<double, double>>& pts, double alpha,
                              double* beta_out) {
    double num = 0.0, den = 0.0;
    for (const auto& [n, f] : pts) {
        const double g = inv_logistic(n * alpha);
        num += f * g;
        den += g * g;
    }
    double beta = den > 0.0 ? num / den : 1.0;
    beta = std::clamp(beta, 1e-12, 1.0);
    double r = 0.0;
    for (const auto& [n, f] : pts) {
        const double diff = f - beta * inv_logistic(n * alpha);
        r += diff * diff;
    }
    if (beta_out) *beta_out = beta;
    return r;
}

}  // namespace

ResourceCount basic_gate_cost(BasicGate gate, double epsilon, int n) {
    check_epsilon(epsilon);
    ResourceCount rc;
    switch (gate) {
        case BasicGate::rzz:
            rc.cnot = 2.0;
            rc.t_gates = 8.0 * std::log2(1.0 / epsilon);
            break;
        case BasicGate::crzz:
            rc.cnot = 4.0;
            rc.t_gates = 8.0 * std::log2(1.0 / epsilon);
            break;
        case BasicGate::cnzz:
            if (n < 2) throw ConfigError("multi-controlled ZZ needs at least two controls");
            rc.cnot = 12.0 * (n - 1) + 4.0;
            rc.t_gates = 14.0 * (n - 1);
            rc.toffoli = 2.0 * (n - 1);
            rc.ancillas = static_cast<double>(n - 1);
            break;
    }
    return rc;
}

ResourceCount method_cost(CostMethod method, int n, double rho, int l_prime, double epsilon,
                          int p, double h2) {
    if (n < 2) throw ConfigError("cost model needs at least two vertices");
    if (!(rho > 0.0 && rho <= 1.0)) throw ConfigError("edge density must lie in (0, 1]");
    if (l_prime < 1) throw ConfigError("circuit depth must be at least one layer");
    check_epsilon(epsilon);
    const double log_eps = std::log2(1.0 / epsilon);
    ResourceCount rc;
    switch (method) {
        case CostMethod::pauli: {
            const double base = std::pow(std::sqrt(rho) * n, 5);
            rc.cnot = base * (l_prime + 2);
            rc.t_gates = 4.0 * base * (l_prime + 1) * log_eps;
            rc.ancillas = 1.0;
            break;
        }
        case CostMethod::rte: {
            const double pc = p * stencil_coefficients(p).c_of_p;
            const double base = rho * n * n;
            rc.cnot = base * (l_prime + 2) * pc;
            rc.t_gates = 4.0 * base * (l_prime + 1) * log_eps * pc;
            rc.ancillas = 1.0;
            break;
        }
        case CostMethod::lcu: {
            if (!(h2 > 0.0)) throw ConfigError("squared-energy estimate must be positive");
            const double base = std::pow(rho, 3) * std::pow(static_cast<double>(n), 6);
            rc.cnot = base * (l_prime + 4) / (4.0 * h2);
            rc.t_gates = base * l_prime * log_eps / h2;
            rc.toffoli = 4.0 * std::log2(static_cast<double>(n));
            rc.ancillas = rc.toffoli;
            break;
        }
    }
    return rc;
}

double qse_threshold(int k, int l_prime, double f_scale) {
    if (k < 2) throw ConfigError("threshold needs at least two generator states");
    if (l_prime < 1) throw ConfigError("circuit depth must be at least one layer");
    if (!(f_scale > 0.0)) throw ConfigError("cost multiplier must be positive");
    // (1 + 1/L') written as (L'+1)/L' keeps the numerator exact in doubles.
    return 4.0 * (k - 1) * (l_prime + 1) / l_prime * f_scale;
}

bool qse_favourable(double f_gcm, double f_qaoa, int k, int l_prime, double f_scale) {
    if (!(f_gcm > 0.0 && f_gcm <= 1.0) || !(f_qaoa > 0.0 && f_qaoa <= 1.0))
        throw ConfigError("fidelities must lie in (0, 1]");
    return f_gcm / f_qaoa >= qse_threshold(k, l_prime, f_scale);
}

double fermi_dirac(const FermiDiracFit& fit, double n) {
    return fit.beta * inv_logistic(n * fit.alpha);
}

FermiDiracFit fit_fermi_dirac(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw ConfigError("decay fit needs at least three samples");
    bool distinct = false;
    for (const auto& [n, f] : points) {
        if (!(f > 0.0 && f <= 1.0)) throw ConfigError("fidelity samples must lie in (0, 1]");
        distinct = distinct || n != points.front().first;
    }
    if (!distinct) throw ConfigError("decay fit needs at least two distinct sizes");

    constexpr double kAlphaLo = -0.5;
    constexpr double kAlphaHi = 2.0;
    constexpr double kStep = 1e-3;
    double best_alpha = kAlphaLo;
    double best_r = std::numeric_limits<double>::infinity();
    for (double a = kAlphaLo; a <= kAlphaHi + 0.5 * kStep; a += kStep) {
        const double r = fit_residual_for_alpha(points, a, nullptr);
        if (r < best_r) {
            best_r = r;
            best_alpha = a;
        }
    }

    // Golden-section refinement inside the winning grid cell.
    double lo = std::max(kAlphaLo, best_alpha - kStep);
    double hi = std::min(kAlphaHi, best_alpha + kStep);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double f1 = fit_residual_for_alpha(points, x1, nullptr);
    double f2 = fit_residual_for_alpha(points, x2, nullptr);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = fit_residual_for_alpha(points, x1, nullptr);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = fit_residual_for_alpha(points, x2, nullptr);
        }
    }
    const double alpha = 0.5 * (lo + hi);

    FermiDiracFit fit;
    fit.alpha = alpha;
    fit.residual = fit_residual_for_alpha(points, alpha, &fit.beta);
    fit.low_confidence =
        std::abs(fit.alpha) < 1e-4 || fit.alpha <= kAlphaLo + kStep || fit.alpha >= kAlphaHi - kStep;
    return fit;
}

std::optional<int> crossover_size(const FermiDiracFit& fit_qaoa, const FermiDiracFit& fit_qse,
                                  int k, double rho, int bound) {
    if (k < 2) throw ConfigError("crossover needs at least two generator states");
    if (!(rho > 0.0 && rho <= 1.0)) throw ConfigError("edge density must lie in (0, 1]");
    if (bound < 2) throw ConfigError("scan bound must be at least two");
    if (!(fit_qaoa.beta > 0.0 && fit_qaoa.beta <= 1.0) ||
        !(fit_qse.beta > 0.0 && fit_qse.beta <= 1.0))
        throw ConfigError("fit amplitudes must lie in (0, 1]");

    const double log_rhs_const = std::log(2.0 * k) + 1.5 * std::log(rho);
    for (int n = 2; n <= bound; ++n) {
        const double log_gain = (std::log(fit_qse.beta) - softplus(n * fit_qse.alpha)) -
                                (std::log(fit_qaoa.beta) - softplus(n * fit_qaoa.alpha));
        const double log_rhs = log_rhs_const + 3.0 * std::log(static_cast<double>(n));
        if (log_gain > log_rhs) return n;
    }
    return std::nullopt;
}

}  // namespace qsemis
