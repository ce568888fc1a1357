#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "qsemis/hamiltonian.hpp"

namespace qsemis {

using cplx = std::complex<double>;

// Dense statevector over n qubits; amps[x] is the amplitude of basis state x
// (bit i of x = occupation of vertex i).  Operations preserve the norm and
// never strip global phase.
struct StateVector {
    int n = 0;
    std::vector<cplx> amps;
};

enum class KernelMode { exact, sampled };

// Shot-noise model for Hadamard-test estimates.  In exact mode the true
// matrix element is returned; in sampled mode the real and imaginary parts
// are estimated from shots/2 Bernoulli draws each (the standard and the
// phase-shifted Hadamard test with equal budgets).
struct ShotModel {
    KernelMode mode = KernelMode::exact;
    long long shots = 0;
    std::uint64_t seed = 0;
};

// splitmix64 step; used to derive independent per-element seeds from a base
// seed without correlated streams.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt);

StateVector plus_state(int n);
StateVector computational_state(int n, std::uint64_t x);

double state_norm(const StateVector& s);

// amps[x] *= exp(-i * gamma * d.values[x])
StateVector apply_cost_phase(const StateVector& s, const DiagonalOperator& d, double gamma);
void apply_cost_phase_inplace(StateVector& s, const DiagonalOperator& d, double gamma);

// exp(+i * beta * X) on every qubit: [[cos b, i sin b], [i sin b, cos b]].
StateVector apply_mixer(const StateVector& s, double beta);
void apply_mixer_inplace(StateVector& s, double beta);

// exp(-i * H * t) for the diagonal cost operator.
StateVector time_evolve(const StateVector& s, const DiagonalOperator& d, double t);

// <a|b>
cplx inner(const StateVector& a, const StateVector& b);

// <s|H|s> for diagonal H.
double expect_diagonal(const StateVector& s, const DiagonalOperator& d);

// Total probability weight on the given basis indices.
double projector_fidelity(const StateVector& s, const std::vector<std::uint64_t>& indices);

struct SymmetryExpectations {
    double hamming = 0.0;  // <sum_i n_i>
    double parity = 0.0;   // <(-1)^(sum_i n_i)>
};
SymmetryExpectations symmetry_expectations(const StateVector& s);

// Estimate of a Hadamard-test matrix element with |true_value| <= 1
// (operator-valued elements are rescaled by the caller).  Deterministic for
// a given (seed, shots).
cplx hadamard_estimate(cplx true_value, const ShotModel& m);

}  // namespace qsemis
