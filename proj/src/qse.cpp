#include "qsemis/qse.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "qsemis/errors.hpp"
#include "qsemis/minimize.hpp"

namespace qsemis {

namespace {

// Spectral weight of phi0 grouped by (exact) diagonal value, so lag sums run
// over distinct energies instead of all 2^n basis states.
std::map<double, double> energy_weights(const StateVector& phi0, const DiagonalOperator& d) {
    std::map<double, double> w;
    for (std::size_t x = 0; x < d.values.size(); ++x) {
        const double p = std::norm(phi0.amps[x]);
        if (p > 0.0) w[d.values[x]] += p;
    }
    return w;
}

cplx lag_overlap(const std::map<double, double>& w, double tau) {
    cplx s(0.0, 0.0);
    for (const auto& [e, p] : w) s += p * std::polar(1.0, -e * tau);
    return s;
}

cplx lag_energy(const std::map<double, double>& w, double tau) {
    cplx s(0.0, 0.0);
    for (const auto& [e, p] : w) s += p * e * std::polar(1.0, -e * tau);
    return s;
}

void check_state_operator(const StateVector& phi0, const DiagonalOperator& d) {
    if (phi0.n != d.n || phi0.amps.size() != d.values.size())
        throw ConfigError("kernel construction: state and operator dimensions disagree");
}

// Mean diagonal value (= identity coefficient of the Pauli form) and the
// matching bound on |E - c0|, used to keep sampled energy elements inside
// the unit disk.
std::pair<double, double> shift_and_bound(const DiagonalOperator& d, double h_scale) {
    double c0 = 0.0;
    for (double v : d.values) c0 += v;
    c0 /= static_cast<double>(d.values.size());
    double bound = 0.0;
    for (double v : d.values) bound = std::max(bound, std::abs(v - c0));
    if (h_scale > 0.0) bound = h_scale;
    return {c0, bound};
}

CMatrix toeplitz_from_lags(int k, const std::vector<cplx>& lags) {
    CMatrix m(k, k);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) m(r, c) = lags[static_cast<std::size_t>(c - r + k - 1)];
    return m;
}

void hermitize(CMatrix& m) {
    for (int i = 0; i < m.rows; ++i) {
        for (int j = i; j < m.cols; ++j) {
            const cplx avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
            m(i, j) = avg;
            m(j, i) = std::conj(avg);
        }
        m(i, i) = cplx(m(i, i).real(), 0.0);
    }
}

double binomial_over_pow2(int n, int j) {
    // C(n, j) / 2^n evaluated stably in doubles.
    double w = std::pow(0.5, n);
    for (int i = 0; i < j; ++i) w *= static_cast<double>(n - i) / static_cast<double>(i + 1);
    return w;
}

}  // namespace

TimeGrid generator_times(int k) {
    if (k < 1) throw ConfigError("generator_times: need at least one time point");
    TimeGrid g;
    g.k = k;
    g.times.resize(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
        g.times[static_cast<std::size_t>(i)] = static_cast<double>(2 * i - (k - 1)) * M_PI / k;
    return g;
}

Kernels build_kernels(const StateVector& phi0, const DiagonalOperator& d, const TimeGrid& grid,
                      const ShotModel& m, double h_scale) {
    check_state_operator(phi0, d);
    const int k = grid.k;
    if (k < 1 || grid.times.size() != static_cast<std::size_t>(k))
        throw ConfigError("build_kernels: malformed time grid");
    const double spacing = k >= 2 ? grid.times[1] - grid.times[0] : 0.0;
    for (int i = 1; i < k; ++i) {
        const double step = grid.times[static_cast<std::size_t>(i)] -
                            grid.times[static_cast<std::size_t>(i - 1)];
        if (std::abs(step - spacing) > 1e-9)
            throw ConfigError("build_kernels: grid is not equally spaced (use the dense builder)");
    }

    const std::map<double, double> w = energy_weights(phi0, d);
    const int lag_count = 2 * k - 1;
    std::vector<cplx> s_lags(static_cast<std::size_t>(lag_count));
    std::vector<cplx> h_lags(static_cast<std::size_t>(lag_count));

    if (m.mode == KernelMode::exact) {
        for (int j = 0; j < k; ++j) {
            const double tau = spacing * j;
            const cplx sv = lag_overlap(w, tau);
            const cplx hv = lag_energy(w, tau);
            s_lags[static_cast<std::size_t>(k - 1 + j)] = sv;
            h_lags[static_cast<std::size_t>(k - 1 + j)] = hv;
            s_lags[static_cast<std::size_t>(k - 1 - j)] = std::conj(sv);
            h_lags[static_cast<std::size_t>(k - 1 - j)] = std::conj(hv);
        }
    } else {
        const auto [c0, bound] = shift_and_bound(d, h_scale);
        std::vector<cplx> s_raw(static_cast<std::size_t>(lag_count));
        std::vector<cplx> h_raw(static_cast<std::size_t>(lag_count));
        for (int i = 0; i < lag_count; ++i) {
            const double tau = spacing * (i - (k - 1));
            const cplx sv = lag_overlap(w, tau);
            ShotModel ms = m;
            ms.seed = derive_seed(m.seed, 2 * static_cast<std::uint64_t>(i));
            const cplx s_est = hadamard_estimate(sv, ms);
            s_raw[static_cast<std::size_t>(i)] = s_est;
            if (bound < 1e-12) {
                h_raw[static_cast<std::size_t>(i)] = c0 * s_est;
            } else {
                const cplx g = (lag_energy(w, tau) - c0 * sv) / bound;
                ShotModel mh = m;
                mh.seed = derive_seed(m.seed, 2 * static_cast<std::uint64_t>(i) + 1);
                h_raw[static_cast<std::size_t>(i)] = c0 * s_est + bound * hadamard_estimate(g, mh);
            }
        }
        for (int i = 0; i < lag_count; ++i) {
            const std::size_t mi = static_cast<std::size_t>(lag_count - 1 - i);
            s_lags[static_cast<std::size_t>(i)] =
                0.5 * (s_raw[static_cast<std::size_t>(i)] + std::conj(s_raw[mi]));
            h_lags[static_cast<std::size_t>(i)] =
                0.5 * (h_raw[static_cast<std::size_t>(i)] + std::conj(h_raw[mi]));
        }
    }

    Kernels out;
    out.k = k;
    out.s = toeplitz_from_lags(k, s_lags);
    out.h = toeplitz_from_lags(k, h_lags);
    out.s_lags = std::move(s_lags);
    out.h_lags = std::move(h_lags);
    return out;
}

Kernels build_kernels_dense(const StateVector& phi0, const DiagonalOperator& d,
                            const TimeGrid& grid, const ShotModel& m, double h_scale) {
    check_state_operator(phi0, d);
    const int k = grid.k;
    if (k < 1 || grid.times.size() != static_cast<std::size_t>(k))
        throw ConfigError("build_kernels_dense: malformed time grid");

    std::vector<StateVector> chi;
    chi.reserve(static_cast<std::size_t>(k));
    for (double t : grid.times) chi.push_back(time_evolve(phi0, d, t));

    Kernels out;
    out.k = k;
    out.s = CMatrix(k, k);
    out.h = CMatrix(k, k);
    const auto [c0, bound] = shift_and_bound(d, h_scale);
    StateVector scaled{phi0.n, std::vector<cplx>(phi0.amps.size())};
    for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) {
            const cplx sv = inner(chi[static_cast<std::size_t>(a)], chi[static_cast<std::size_t>(b)]);
            for (std::size_t x = 0; x < scaled.amps.size(); ++x)
                scaled.amps[x] = d.values[x] * chi[static_cast<std::size_t>(b)].amps[x];
            const cplx hv = inner(chi[static_cast<std::size_t>(a)], scaled);
            if (m.mode == KernelMode::exact) {
                out.s(a, b) = sv;
                out.h(a, b) = hv;
            } else {
                const std::uint64_t cell = static_cast<std::uint64_t>(a) * k + b;
                ShotModel ms = m;
                ms.seed = derive_seed(m.seed, 8192 + 2 * cell);
                const cplx s_est = hadamard_estimate(sv, ms);
                out.s(a, b) = s_est;
                if (bound < 1e-12) {
                    out.h(a, b) = c0 * s_est;
                } else {
                    ShotModel mh = m;
                    mh.seed = derive_seed(m.seed, 8192 + 2 * cell + 1);
                    out.h(a, b) = c0 * s_est + bound * hadamard_estimate((hv - c0 * sv) / bound, mh);
                }
            }
        }
    }
    if (m.mode == KernelMode::sampled) {
        hermitize(out.s);
        hermitize(out.h);
    }
    return out;
}

SubspaceSolution solve_truncated(const Kernels& k, double epsilon_cut) {
    if (k.k < 1) throw ConfigError("solve_truncated: empty kernels");
    if (!(epsilon_cut > 0.0)) throw ConfigError("solve_truncated: threshold must be positive");

    const HermitianEig se = eig_hermitian(k.s);
    std::vector<int> kept;
    for (int i = 0; i < k.k; ++i)
        if (se.values[static_cast<std::size_t>(i)] >= epsilon_cut) kept.push_back(i);
    const int r = static_cast<int>(kept.size());
    if (r == 0)
        throw NumericalError(
            "solve_truncated: empty subspace (every overlap eigenvalue fell below the threshold)");

    CMatrix b(k.k, r);
    for (int j = 0; j < r; ++j) {
        const int src = kept[static_cast<std::size_t>(j)];
        const double scale = 1.0 / std::sqrt(se.values[static_cast<std::size_t>(src)]);
        for (int i = 0; i < k.k; ++i) b(i, j) = se.vectors(i, src) * scale;
    }

    CMatrix ht = matmul(adjoint(b), matmul(k.h, b));
    hermitize(ht);
    const HermitianEig he = eig_hermitian(ht);

    SubspaceSolution sol;
    sol.energies = he.values;
    sol.weights = matmul(b, he.vectors);
    sol.retained = r;
    sol.epsilon_cut = epsilon_cut;
    sol.converged = true;
    return sol;
}

SubspaceSolution solve_deflation(const Kernels& k, int n_states, double mu0,
                                 std::vector<double> lambdas, const DeflationConfig& cfg) {
    if (k.k < 1) throw ConfigError("solve_deflation: empty kernels");
    if (n_states < 1 || n_states > k.k)
        throw ConfigError("solve_deflation: state count must be in [1, K]");
    if (cfg.starts < 1) throw ConfigError("solve_deflation: need at least one start");

    double mu = mu0;
    if (!(mu > 0.0)) {
        const HermitianEig he = eig_hermitian(k.h);
        mu = 10.0 * std::max(1e-6, he.values.back() - he.values.front());
    }
    if (lambdas.empty()) {
        lambdas.assign(static_cast<std::size_t>(n_states - 1), mu);
    } else if (lambdas.size() != static_cast<std::size_t>(n_states - 1)) {
        throw ConfigError("solve_deflation: need one lambda per deflation constraint");
    }
    for (double l : lambdas)
        if (!(l > 0.0)) throw ConfigError("solve_deflation: penalties must be positive");

    const int kk = k.k;
    const std::size_t dim = 2 * static_cast<std::size_t>(kk);
    const std::vector<double> lo(dim, -50.0);
    const std::vector<double> hi(dim, 50.0);
    MinimizeOptions mopt;
    mopt.tolerance = cfg.tolerance;
    mopt.max_evals = cfg.max_evals;

    SubspaceSolution sol;
    sol.weights = CMatrix(kk, n_states);
    sol.retained = kk;
    sol.epsilon_cut = 0.0;
    sol.converged = true;

    std::vector<std::vector<cplx>> found;  // S * f_prev, premultiplied
    auto unpack = [kk](const std::vector<double>& x) {
        std::vector<cplx> f(static_cast<std::size_t>(kk));
        for (int i = 0; i < kk; ++i)
            f[static_cast<std::size_t>(i)] = cplx(x[2 * static_cast<std::size_t>(i)],
                                                  x[2 * static_cast<std::size_t>(i) + 1]);
        return f;
    };

    for (int j = 0; j < n_states; ++j) {
        auto objective = [&](const std::vector<double>& x) {
            const std::vector<cplx> f = unpack(x);
            const std::vector<cplx> sf = matvec(k.s, f);
            const std::vector<cplx> hf = matvec(k.h, f);
            cplx fsf(0.0, 0.0), fhf(0.0, 0.0);
            for (int i = 0; i < kk; ++i) {
                fsf += std::conj(f[static_cast<std::size_t>(i)]) * sf[static_cast<std::size_t>(i)];
                fhf += std::conj(f[static_cast<std::size_t>(i)]) * hf[static_cast<std::size_t>(i)];
            }
            double obj = fhf.real() + mu * (1.0 - fsf.real()) * (1.0 - fsf.real());
            for (std::size_t p = 0; p < found.size(); ++p) {
                cplx ov(0.0, 0.0);
                for (int i = 0; i < kk; ++i)
                    ov += std::conj(found[p][static_cast<std::size_t>(i)]) *
                          f[static_cast<std::size_t>(i)];
                obj += lambdas[p] * std::norm(ov);
            }
            return obj;
        };

        double best_val = 0.0;
        std::vector<double> best_x;
        for (int s = 0; s < cfg.starts; ++s) {
            std::vector<double> x0(dim, 0.0);
            if (s == 0) {
                x0[0] = 1.0;
            } else {
                std::mt19937_64 rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(j) * 1024 +
                                                              static_cast<std::uint64_t>(s)));
                for (double& v : x0) v = 2.0 * (static_cast<double>(rng() >> 11) * 0x1p-53) - 1.0;
            }
            // Scale the start onto the f^dag S f = 1 shell when possible.
            {
                const std::vector<cplx> f = unpack(x0);
                const std::vector<cplx> sf = matvec(k.s, f);
                cplx fsf(0.0, 0.0);
                for (int i = 0; i < kk; ++i)
                    fsf +=
                        std::conj(f[static_cast<std::size_t>(i)]) * sf[static_cast<std::size_t>(i)];
                if (fsf.real() > 1e-8) {
                    const double scale = 1.0 / std::sqrt(fsf.real());
                    for (double& v : x0) v *= scale;
                }
            }
            const MinimizeResult r = minimize_bounded(objective, x0, lo, hi, mopt);
            if (best_x.empty() || r.value < best_val) {
                best_val = r.value;
                best_x = r.x;
            }
        }

        std::vector<cplx> f = unpack(best_x);
        const std::vector<cplx> sf = matvec(k.s, f);
        const std::vector<cplx> hf = matvec(k.h, f);
        cplx fsf(0.0, 0.0), fhf(0.0, 0.0);
        for (int i = 0; i < kk; ++i) {
            fsf += std::conj(f[static_cast<std::size_t>(i)]) * sf[static_cast<std::size_t>(i)];
            fhf += std::conj(f[static_cast<std::size_t>(i)]) * hf[static_cast<std::size_t>(i)];
        }
        if (fsf.real() < 1e-10 || std::abs(fsf.real() - 1.0) > 0.5) sol.converged = false;
        double energy = 0.0;
        if (fsf.real() > 1e-10) {
            const double scale = 1.0 / std::sqrt(fsf.real());
            for (cplx& v : f) v *= scale;
            energy = fhf.real() / fsf.real();
        }
        sol.energies.push_back(energy);
        for (int i = 0; i < kk; ++i) sol.weights(i, j) = f[static_cast<std::size_t>(i)];
        found.push_back(matvec(k.s, f));
    }
    return sol;
}

StateVector weighted_evolved_sum(const StateVector& phi0, const DiagonalOperator& d,
                                 const std::vector<double>& times,
                                 const std::vector<cplx>& weights) {
    check_state_operator(phi0, d);
    if (times.size() != weights.size() || times.empty())
        throw ConfigError("weighted_evolved_sum: times and weights must match and be non-empty");
    StateVector acc{phi0.n, std::vector<cplx>(phi0.amps.size(), cplx(0.0, 0.0))};
    for (std::size_t i = 0; i < times.size(); ++i) {
        const StateVector evolved = time_evolve(phi0, d, times[i]);
        for (std::size_t x = 0; x < acc.amps.size(); ++x) acc.amps[x] += weights[i] * evolved.amps[x];
    }
    return acc;
}

AssembledState assemble_state(const StateVector& phi0, const DiagonalOperator& d,
                              const std::vector<double>& times, const std::vector<cplx>& weights) {
    bool all_zero = true;
    for (const cplx& w : weights) all_zero = all_zero && w == cplx(0.0, 0.0);
    if (weights.empty() || all_zero)
        throw ConfigError("assemble_state: weight vector is zero");
    StateVector sum = weighted_evolved_sum(phi0, d, times, weights);
    double norm2 = 0.0;
    for (const cplx& a : sum.amps) norm2 += std::norm(a);
    if (norm2 < 1e-24)
        throw NumericalError("assemble_state: assembled state has vanishing norm");
    const double inv = 1.0 / std::sqrt(norm2);
    for (cplx& a : sum.amps) a *= inv;
    return AssembledState{std::move(sum), norm2};
}

AssembledState assemble_state(const StateVector& phi0, const DiagonalOperator& d,
                              const TimeGrid& grid, const std::vector<cplx>& weights) {
    if (grid.times.size() != weights.size())
        throw ConfigError("assemble_state: grid and weight sizes disagree");
    return assemble_state(phi0, d, grid.times, weights);
}

Metrics evaluate_metrics(const StateVector& s, const DiagonalOperator& d, const MisResult& oracle) {
    check_state_operator(s, d);
    const GroundManifold gm = ground_manifold(d);
    Metrics m;
    m.energy = expect_diagonal(s, d);
    m.approx_ratio = (m.energy > 0.0 || gm.emin >= 0.0) ? 0.0 : m.energy / gm.emin;
    // The projector weight can creep past 1 by a few ulp on a normalized
    // state; the metric is defined on [0, 1].
    m.fidelity = std::clamp(projector_fidelity(s, gm.indices), 0.0, 1.0);
    const SymmetryExpectations se = symmetry_expectations(s);
    m.hamming_error = std::abs(se.hamming - static_cast<double>(oracle.size));
    m.parity_error = std::abs(se.parity - (oracle.size % 2 == 0 ? 1.0 : -1.0));
    return m;
}

double reencode_probability(const std::vector<cplx>& f, const Kernels& k) {
    if (f.size() != static_cast<std::size_t>(k.k))
        throw ConfigError("reencode_probability: weight size disagrees with kernels");
    double denom = 0.0;
    for (const cplx& v : f) denom += std::abs(v);
    denom *= denom;
    if (denom < 1e-300) throw ConfigError("reencode_probability: zero weight vector");
    const std::vector<cplx> sf = matvec(k.s, f);
    cplx num(0.0, 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) num += std::conj(f[i]) * sf[i];
    return num.real() / denom;
}

FilterTerms gaussian_filter_weights(int k, double t, double shift) {
    if (k < 1) throw ConfigError("gaussian_filter_weights: need K >= 1");
    if (!(t > 0.0)) throw ConfigError("gaussian_filter_weights: time step must be positive");
    FilterTerms ft;
    for (int j = 0; j <= k; ++j) {
        const double time = static_cast<double>(k - 2 * j) * t;
        ft.times.push_back(time);
        ft.weights.push_back(binomial_over_pow2(k, j) * std::polar(1.0, shift * time));
    }
    return ft;
}

FilterTerms ite_weights(int k, double t) {
    if (k < 1) throw ConfigError("ite_weights: need K >= 1");
    if (!(t > 0.0)) throw ConfigError("ite_weights: time step must be positive");
    FilterTerms ft;
    // w_j = C(K, j) ((1+i)/2)^j ((1-i)/2)^(K-j) at time (K-2j)t; the j -> j+1
    // step multiplies by i (K-j)/(j+1) since (1+i)/(1-i) = i.
    cplx w = std::pow(cplx(0.5, -0.5), k);
    for (int j = 0; j <= k; ++j) {
        ft.times.push_back(static_cast<double>(k - 2 * j) * t);
        ft.weights.push_back(w);
        w *= cplx(0.0, 1.0) * (static_cast<double>(k - j) / static_cast<double>(j + 1));
    }
    return ft;
}

FilterProbability filter_success_probability(const StateVector& phi0, const DiagonalOperator& d,
                                             int k, double t, double shift) {
    check_state_operator(phi0, d);
    const FilterTerms ft = gaussian_filter_weights(k, t, shift);
    const StateVector sum = weighted_evolved_sum(phi0, d, ft.times, ft.weights);
    double norm2 = 0.0;
    for (const cplx& a : sum.amps) norm2 += std::norm(a);
    double wsum = 0.0;
    for (const cplx& w : ft.weights) wsum += std::abs(w);

    FilterProbability p;
    p.exact = norm2 / (wsum * wsum);
    p.gaussian = 0.0;
    for (std::size_t x = 0; x < d.values.size(); ++x) {
        const double e = d.values[x] - shift;
        p.gaussian += std::norm(phi0.amps[x]) * std::exp(-static_cast<double>(k) * t * t * e * e);
    }
    return p;
}

RteEstimate rte_extract_kernels(const std::vector<cplx>& lag_values, const Stencil& st, double dt,
                                std::optional<cplx> value_at_zero) {
    if (lag_values.size() != st.offsets.size())
        throw ConfigError("rte_extract_kernels: one lag sample per stencil offset required");
    if (!(dt > 0.0)) throw ConfigError("rte_extract_kernels: time step must be positive");
    cplx deriv(0.0, 0.0);
    for (std::size_t i = 0; i < lag_values.size(); ++i) deriv += st.coefficients[i] * lag_values[i];
    RteEstimate est;
    est.h_est = cplx(0.0, 1.0) * deriv / dt;
    if (value_at_zero.has_value()) {
        est.s_est = *value_at_zero;
    } else {
        const std::size_t m = st.offsets.size() / 2;
        est.s_est = 0.5 * (lag_values[m - 1] + lag_values[m]);
    }
    return est;
}

}  // namespace qsemis
