#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qsemis/graph.hpp"
#include "qsemis/hamiltonian.hpp"
#include "qsemis/linalg.hpp"
#include "qsemis/simulator.hpp"

namespace qsemis {

// K time points, equally spaced and symmetric about zero.  For K >= 2 the
// endpoints are +/- pi(1 - 1/K), so neighbouring points sit 2*pi/K apart;
// K = 1 degenerates to {0}.
struct TimeGrid {
    int k = 0;
    std::vector<double> times;
};

TimeGrid generator_times(int k);

// Subspace kernels H_kk' = <chi_k|H|chi_k'> and S_kk' = <chi_k|chi_k'> for
// trial states chi_k = U(t_k)|phi0>.  On an equally spaced grid both are
// Toeplitz; s_lags/h_lags hold the 2K-1 generating values, index i being the
// lag (i - K + 1) * spacing, so entry (k, k') equals lag index k' - k + K - 1.
struct Kernels {
    int k = 0;
    CMatrix h;
    CMatrix s;
    std::vector<cplx> s_lags;
    std::vector<cplx> h_lags;
};

// Lag-based construction (2K-1 matrix elements per kernel).  In sampled mode
// every distinct lag is estimated through hadamard_estimate; the energy
// kernel is measured as c0 * s + scale * g with c0 the spectral mean, where
// g stays inside the unit disk.  h_scale <= 0 selects the exact bound
// max|E - c0|; a caller may pass a looser hardware-style bound instead.
Kernels build_kernels(const StateVector& phi0, const DiagonalOperator& d, const TimeGrid& grid,
                      const ShotModel& m, double h_scale = 0.0);

// Validation path: builds all K^2 elements independently (no Toeplitz reuse);
// lags are left empty.  Accepts arbitrary (not necessarily uniform) times.
Kernels build_kernels_dense(const StateVector& phi0, const DiagonalOperator& d,
                            const TimeGrid& grid, const ShotModel& m, double h_scale = 0.0);

// Result of a subspace diagonalization.  Weight column j satisfies
// f_j^dag S f_j = 1; energies are ascending for the truncated solver and in
// discovery order for deflation (which finds them lowest-first in practice).
struct SubspaceSolution {
    std::vector<double> energies;
    CMatrix weights;  // K x (number of states)
    int retained = 0;
    double epsilon_cut = 0.0;
    bool converged = true;
};

inline constexpr double kDefaultEpsilonCut = 1e-3;

// Whitened generalized eigensolve: diagonalize S, drop overlap eigenvalues
// below epsilon_cut (this also removes negative sampled eigenvalues), solve
// the projected standard problem, and map weights back to the trial basis.
SubspaceSolution solve_truncated(const Kernels& k, double epsilon_cut = kDefaultEpsilonCut);

struct DeflationConfig {
    int starts = 8;
    double tolerance = 1e-10;
    int max_evals = 4000;
    std::uint64_t seed = 0;
};

// Sequential penalized minimization of f^dag H f with a soft normalization
// penalty mu0 (1 - f^dag S f)^2 and overlap penalties lambda_j |f_j^dag S f|^2
// against already-found states.  mu0 <= 0 selects 10x the spectral range of
// the H kernel; an empty lambdas list repeats the effective mu0.
SubspaceSolution solve_deflation(const Kernels& k, int n_states, double mu0,
                                 std::vector<double> lambdas, const DeflationConfig& cfg);

struct AssembledState {
    StateVector state;   // normalized
    double norm2 = 0.0;  // pre-normalization squared norm (f^dag S f)
};

// Unnormalized sum_k w_k U(t_k) |phi0>.
StateVector weighted_evolved_sum(const StateVector& phi0, const DiagonalOperator& d,
                                 const std::vector<double>& times,
                                 const std::vector<cplx>& weights);

AssembledState assemble_state(const StateVector& phi0, const DiagonalOperator& d,
                              const std::vector<double>& times, const std::vector<cplx>& weights);
AssembledState assemble_state(const StateVector& phi0, const DiagonalOperator& d,
                              const TimeGrid& grid, const std::vector<cplx>& weights);

struct Metrics {
    double energy = 0.0;
    double approx_ratio = 0.0;   // energy / E_min, reported as 0 if energy > 0
    double fidelity = 0.0;       // weight on the ground manifold of d
    double hamming_error = 0.0;  // |<n> - MIS size|
    double parity_error = 0.0;   // |<P> - (-1)^{MIS size}|
};

Metrics evaluate_metrics(const StateVector& s, const DiagonalOperator& d, const MisResult& oracle);

// Probability that re-encoding the combination f of trial states onto a
// register succeeds: (f^dag S f) / (sum_k |f_k|)^2.
double reencode_probability(const std::vector<cplx>& f, const Kernels& k);

struct FilterTerms {
    std::vector<double> times;
    std::vector<cplx> weights;
};

// Cosine filter from iterating (U(t) + U(-t))/2 K times: K+1 terms, times
// (K-2k)t with binomial weights C(K,k)/2^K.  A nonzero energy shift is
// folded into the weights as phases exp(i * shift * t_k), so downstream
// evolution can use the unshifted operator.
FilterTerms gaussian_filter_weights(int k, double t, double shift = 0.0);

// Linear-in-energy filter from iterating ((1+i)U(-t) + (1-i)U(t))/2 K times:
// times (K-2k)t with weights C(K,k) ((1+i)/2)^k ((1-i)/2)^(K-k).  On an
// eigenstate of energy eps the amplitude gains (cos(eps t) - sin(eps t))^K
// = exp(-K eps t + O(t^2)); shifts are applied by the caller.
FilterTerms ite_weights(int k, double t);

struct FilterProbability {
    double exact = 0.0;     // ||sum_k w_k U(t_k)|phi0>||^2 / (sum_k |w_k|)^2
    double gaussian = 0.0;  // <exp(-K t^2 (H - shift)^2)>, the filter's Gaussian limit
};

FilterProbability filter_success_probability(const StateVector& phi0, const DiagonalOperator& d,
                                             int k, double t, double shift);

struct RteEstimate {
    cplx s_est;
    cplx h_est;
};

// First-derivative extraction of a kernel pair from real-time lag samples:
// lag_values[i] is <e^{-iHt}> at t = stencil.offsets[i] * dt, and
// h_est = (i/dt) sum_j c_j lag_values[j].  The overlap estimate is the t = 0
// sample when provided, otherwise the mean of the innermost symmetric pair.
RteEstimate rte_extract_kernels(const std::vector<cplx>& lag_values, const Stencil& st, double dt,
                                std::optional<cplx> value_at_zero = std::nullopt);

}  // namespace qsemis
