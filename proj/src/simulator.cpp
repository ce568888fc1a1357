#include "qsemis/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <sstream>

#include "qsemis/errors.hpp"

namespace qsemis {

namespace {

void require_same_n(int a, int b, const char* where) {
    if (a != b) {
        std::ostringstream os;
        os << where << ": dimension mismatch (" << a << " vs " << b << " qubits)";
        throw ConfigError(os.str());
    }
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

StateVector plus_state(int n) {
    if (n < 1 || n > kMaxDenseVertices) throw InfeasibleError("plus_state: qubit count out of range");
    StateVector s;
    s.n = n;
    s.amps.assign(1ULL << n, cplx(std::pow(2.0, -0.5 * n), 0.0));
    return s;
}

StateVector computational_state(int n, std::uint64_t x) {
    if (n < 1 || n > kMaxDenseVertices) throw InfeasibleError("computational_state: qubit count out of range");
    if (x >= (1ULL << n)) throw ConfigError("computational_state: basis index out of range");
    StateVector s;
    s.n = n;
    s.amps.assign(1ULL << n, cplx(0.0, 0.0));
    s.amps[x] = 1.0;
    return s;
}

double state_norm(const StateVector& s) {
    double total = 0.0;
    for (const cplx& a : s.amps) total += std::norm(a);
    return std::sqrt(total);
}

void apply_cost_phase_inplace(StateVector& s, const DiagonalOperator& d, double gamma) {
    require_same_n(s.n, d.n, "apply_cost_phase");
    for (std::size_t x = 0; x < s.amps.size(); ++x)
        s.amps[x] *= std::polar(1.0, -gamma * d.values[x]);
}

StateVector apply_cost_phase(const StateVector& s, const DiagonalOperator& d, double gamma) {
    StateVector out = s;
    apply_cost_phase_inplace(out, d, gamma);
    return out;
}

void apply_mixer_inplace(StateVector& s, double beta) {
    const double c = std::cos(beta);
    const cplx is(0.0, std::sin(beta));
    for (int qubit = 0; qubit < s.n; ++qubit) {
        const std::uint64_t bit = 1ULL << qubit;
        for (std::uint64_t x = 0; x < s.amps.size(); ++x) {
            if (x & bit) continue;
            const cplx a0 = s.amps[x];
            const cplx a1 = s.amps[x | bit];
            s.amps[x] = c * a0 + is * a1;
            s.amps[x | bit] = is * a0 + c * a1;
        }
    }
}

StateVector apply_mixer(const StateVector& s, double beta) {
    StateVector out = s;
    apply_mixer_inplace(out, beta);
    return out;
}

StateVector time_evolve(const StateVector& s, const DiagonalOperator& d, double t) {
    return apply_cost_phase(s, d, t);
}

cplx inner(const StateVector& a, const StateVector& b) {
    require_same_n(a.n, b.n, "inner");
    cplx total(0.0, 0.0);
    for (std::size_t x = 0; x < a.amps.size(); ++x) total += std::conj(a.amps[x]) * b.amps[x];
    return total;
}

double expect_diagonal(const StateVector& s, const DiagonalOperator& d) {
    require_same_n(s.n, d.n, "expect_diagonal");
    double total = 0.0;
    for (std::size_t x = 0; x < s.amps.size(); ++x) total += d.values[x] * std::norm(s.amps[x]);
    return total;
}

double projector_fidelity(const StateVector& s, const std::vector<std::uint64_t>& indices) {
    double total = 0.0;
    for (std::uint64_t x : indices) {
        if (x >= s.amps.size()) throw ConfigError("projector_fidelity: basis index out of range");
        total += std::norm(s.amps[x]);
    }
    return total;
}

SymmetryExpectations symmetry_expectations(const StateVector& s) {
    SymmetryExpectations out;
    for (std::uint64_t x = 0; x < s.amps.size(); ++x) {
        const double w = std::norm(s.amps[x]);
        const int pop = std::popcount(x);
        out.hamming += pop * w;
        out.parity += ((pop & 1) ? -1.0 : 1.0) * w;
    }
    return out;
}

cplx hadamard_estimate(cplx true_value, const ShotModel& m) {
    if (std::abs(true_value) > 1.0 + 1e-9)
        throw ConfigError("hadamard_estimate: matrix element outside the unit disk; rescale first");
    if (m.mode == KernelMode::exact) return true_value;
    if (m.shots < 2) throw ConfigError("hadamard_estimate: sampled mode needs at least 2 shots");
    std::mt19937_64 rng(m.seed);
    constexpr double kInv53 = 1.0 / 9007199254740992.0;  // 2^-53
    const long long half = m.shots / 2;
    auto quadrature = [&](double component) {
        const double p = std::clamp(0.5 * (1.0 + component), 0.0, 1.0);
        long long hits = 0;
        for (long long i = 0; i < half; ++i)
            hits += (static_cast<double>(rng() >> 11) * kInv53) < p;
        return 2.0 * (static_cast<double>(hits) / half) - 1.0;
    };
    const double re = quadrature(true_value.real());
    const double im = quadrature(true_value.imag());
    return {re, im};
}

}  // namespace qsemis
