#pragma once

#include <optional>
#include <utility>
#include <vector>

namespace qsemis {

/// The three primitive fault-tolerant gate decompositions that circuit costs
/// are expressed in.
enum class BasicGate { rzz, crzz, cnzz };

/// Kernel-evaluation strategies whose leading-order circuit costs are modeled.
enum class CostMethod { pauli, rte, lcu };

/// Leading-order gate counts for one expectation-value circuit. Values are
/// kept as reals: the formulas are leading-order in N and rounding would
/// fabricate precision.
struct ResourceCount {
    double cnot = 0.0;
    double t_gates = 0.0;
    double toffoli = 0.0;
    double ancillas = 0.0;
};

/// Synthesis cost of one basic gate.
///  rzz  -> (2, 8 log2(1/eps), 0, 0)
///  crzz -> (4, 8 log2(1/eps), 0, 0)
///  cnzz -> (12(n-1)+4, 14(n-1), 2(n-1), n-1); needs n >= 2 controls.
/// epsilon is the rotation-synthesis error, required in (0, 1).
ResourceCount basic_gate_cost(BasicGate gate, double epsilon, int n = 0);

/// Whole-circuit cost of estimating one kernel matrix element on an
/// Erdos-Renyi instance with N vertices and edge density rho, after a QAOA
/// stage of depth l_prime.
///  pauli -> cnot (sqrt(rho) N)^5 (L'+2), t 4 (sqrt(rho) N)^5 (L'+1) log2(1/eps), 1 ancilla
///  rte   -> cnot rho N^2 (L'+2) p C(p), t 4 rho N^2 (L'+1) log2(1/eps) p C(p), 1 ancilla
///  lcu   -> cnot rho^3 N^6 (L'+4) / (4 h2), t rho^3 N^6 L' log2(1/eps) / h2,
///           toffoli and ancillas both 4 log2(N)
/// p selects the finite-difference stencil for rte (C(p) from the stencil
/// tables); h2 is the <H^2> estimate for lcu and must be positive.
ResourceCount method_cost(CostMethod method, int n, double rho, int l_prime, double epsilon,
                          int p = 2, double h2 = 1.0);

/// Cost-to-fidelity threshold 4 (K-1)(1 + 1/L') * f_scale.
double qse_threshold(int k, int l_prime, double f_scale);

/// True when the fidelity gain f_gcm / f_qaoa meets or exceeds the threshold
/// above. f_scale carries the per-method circuit-cost multiplier and has no
/// default: pick it from the method actually used (shot multiplier for Pauli,
/// p C(p) for RTE, inverse success probability for LCU).
bool qse_favourable(double f_gcm, double f_qaoa, int k, int l_prime, double f_scale);

/// Two-parameter decay model F(N) = beta / (1 + e^{N alpha}).
struct FermiDiracFit {
    double alpha = 0.0;
    double beta = 1.0;
    double residual = 0.0;
    /// Set when the fitted curve carries no usable decay signal (alpha
    /// indistinguishable from zero or pinned at the search boundary), in which
    /// case extrapolations from the fit are unreliable.
    bool low_confidence = false;
};

/// Evaluates the fitted curve at size n.
double fermi_dirac(const FermiDiracFit& fit, double n);

/// Least-squares fit of (N, fidelity) samples to the decay model, using a
/// deterministic coarse alpha grid with the closed-form optimal beta per
/// alpha, then golden-section refinement. Needs >= 3 points with at least two
/// distinct N and fidelities in (0, 1].
FermiDiracFit fit_fermi_dirac(const std::vector<std::pair<double, double>>& points);

/// Smallest integer N >= 2 whose fitted fidelity gain beats the kernel-cost
/// overhead: F_qse(N) / F_qaoa(N) > 2 K (sqrt(rho) N)^3, evaluated in log
/// space. Returns nullopt when no such N exists up to `bound`.
std::optional<int> crossover_size(const FermiDiracFit& fit_qaoa, const FermiDiracFit& fit_qse,
                                  int k, double rho, int bound = 10000);

}  // namespace qsemis
