#include "qsemis/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qsemis/errors.hpp"

namespace qsemis {

namespace {

double max_abs(const CMatrix& m) {
    double r = 0.0;
    for (const cplx& z : m.data) r = std::max(r, std::abs(z));
    return r;
}

double offdiag_norm(const CMatrix& m) {
    double s = 0.0;
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j)
            if (i != j) s += std::norm(m(i, j));
    return std::sqrt(s);
}

}  // namespace

CMatrix::CMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c) {}

CMatrix CMatrix::identity(int k) {
    CMatrix m(k, k);
    for (int i = 0; i < k; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix adjoint(const CMatrix& m) {
    CMatrix r(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r(j, i) = std::conj(m(i, j));
    return r;
}

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
    if (a.cols != b.rows) throw ConfigError("matmul: inner dimensions disagree");
    CMatrix r(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i) {
        for (int k = 0; k < a.cols; ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx(0.0, 0.0)) continue;
            for (int j = 0; j < b.cols; ++j) r(i, j) += aik * b(k, j);
        }
    }
    return r;
}

std::vector<cplx> matvec(const CMatrix& m, const std::vector<cplx>& v) {
    if (static_cast<std::size_t>(m.cols) != v.size()) throw ConfigError("matvec: dimensions disagree");
    std::vector<cplx> r(static_cast<std::size_t>(m.rows));
    for (int i = 0; i < m.rows; ++i) {
        cplx s(0.0, 0.0);
        for (int j = 0; j < m.cols; ++j) s += m(i, j) * v[static_cast<std::size_t>(j)];
        r[static_cast<std::size_t>(i)] = s;
    }
    return r;
}

HermitianEig eig_hermitian(const CMatrix& m) {
    if (m.rows != m.cols) throw ConfigError("eig_hermitian: matrix must be square");
    const int k = m.rows;
    for (const cplx& z : m.data)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw NumericalError("eig_hermitian: non-finite matrix entry");

    const double scale = std::max(1.0, max_abs(m));
    CMatrix a(k, k);
    double asym = 0.0;
    for (int i = 0; i < k; ++i) {
        for (int j = i; j < k; ++j) {
            asym = std::max(asym, std::abs(m(i, j) - std::conj(m(j, i))));
            const cplx avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
            a(i, j) = avg;
            a(j, i) = std::conj(avg);
        }
        a(i, i) = cplx(a(i, i).real(), 0.0);
    }
    if (asym > 1e-8 * scale) throw NumericalError("eig_hermitian: input is not Hermitian");

    CMatrix v = CMatrix::identity(k);
    double frob = 0.0;
    for (const cplx& z : a.data) frob += std::norm(z);
    frob = std::sqrt(frob);
    const double stop = 1e-15 * std::max(frob, 1e-300);

    bool converged = offdiag_norm(a) <= stop;
    for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
        for (int p = 0; p < k - 1; ++p) {
            for (int q = p + 1; q < k; ++q) {
                const cplx apq = a(p, q);
                const double beta = std::abs(apq);
                if (beta < 1e-300) continue;
                const cplx phase = apq / beta;  // e^{i phi}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (app - aqq) / (2.0 * beta);
                const double t =
                    (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // Columns p, q of A: A <- A * U with U = [[c, -s e^{i phi}],
                // [s e^{-i phi}, c]] restricted to the (p, q) plane.
                for (int i = 0; i < k; ++i) {
                    const cplx aip = a(i, p);
                    const cplx aiq = a(i, q);
                    a(i, p) = c * aip + s * std::conj(phase) * aiq;
                    a(i, q) = -s * phase * aip + c * aiq;
                }
                // Rows p, q: A <- U^dagger * A.
                for (int j = 0; j < k; ++j) {
                    const cplx apj = a(p, j);
                    const cplx aqj = a(q, j);
                    a(p, j) = c * apj + s * phase * aqj;
                    a(q, j) = -s * std::conj(phase) * apj + c * aqj;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = cplx(a(p, p).real(), 0.0);
                a(q, q) = cplx(a(q, q).real(), 0.0);

                for (int i = 0; i < k; ++i) {
                    const cplx vip = v(i, p);
                    const cplx viq = v(i, q);
                    v(i, p) = c * vip + s * std::conj(phase) * viq;
                    v(i, q) = -s * phase * vip + c * viq;
                }
            }
        }
        converged = offdiag_norm(a) <= stop;
    }
    if (!converged) throw NumericalError("eig_hermitian: Jacobi sweeps did not converge");

    std::vector<int> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return a(x, x).real() < a(y, y).real(); });

    HermitianEig out;
    out.values.resize(static_cast<std::size_t>(k));
    out.vectors = CMatrix(k, k);
    for (int col = 0; col < k; ++col) {
        const int src = order[static_cast<std::size_t>(col)];
        out.values[static_cast<std::size_t>(col)] = a(src, src).real();
        double peak = 0.0;
        for (int i = 0; i < k; ++i) peak = std::max(peak, std::abs(v(i, src)));
        cplx fix(1.0, 0.0);
        for (int i = 0; i < k; ++i) {
            const cplx vi = v(i, src);
            if (std::abs(vi) > 1e-8 * peak) {
                fix = std::conj(vi) / std::abs(vi);
                break;
            }
        }
        for (int i = 0; i < k; ++i) out.vectors(i, col) = fix * v(i, src);
    }
    return out;
}

Stencil stencil_coefficients(int p) {
    if (p != 2 && p != 4 && p != 6 && p != 8) {
        std::ostringstream msg;
        msg << "stencil_coefficients: unsupported order " << p << " (need 2, 4, 6 or 8)";
        throw ConfigError(msg.str());
    }
    const int m = p / 2;

    // With antisymmetric coefficients the even moments vanish automatically;
    // writing d_j = j * c_j, the odd moment conditions become a Vandermonde
    // system in the nodes j^2: sum_j d_j (j^2)^k = 1/2 for k = 0, else 0.
    std::vector<std::vector<double>> sys(static_cast<std::size_t>(m),
                                         std::vector<double>(static_cast<std::size_t>(m) + 1, 0.0));
    for (int row = 0; row < m; ++row) {
        for (int j = 1; j <= m; ++j)
            sys[static_cast<std::size_t>(row)][static_cast<std::size_t>(j - 1)] =
                std::pow(static_cast<double>(j) * j, row);
        sys[static_cast<std::size_t>(row)][static_cast<std::size_t>(m)] = (row == 0) ? 0.5 : 0.0;
    }
    // Gaussian elimination with partial pivoting; the system is at most 4x4.
    for (int col = 0; col < m; ++col) {
        int pivot = col;
        for (int row = col + 1; row < m; ++row)
            if (std::abs(sys[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)]) >
                std::abs(sys[static_cast<std::size_t>(pivot)][static_cast<std::size_t>(col)]))
                pivot = row;
        std::swap(sys[static_cast<std::size_t>(col)], sys[static_cast<std::size_t>(pivot)]);
        const double diag = sys[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
        for (int row = col + 1; row < m; ++row) {
            const double f =
                sys[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] / diag;
            for (int c2 = col; c2 <= m; ++c2)
                sys[static_cast<std::size_t>(row)][static_cast<std::size_t>(c2)] -=
                    f * sys[static_cast<std::size_t>(col)][static_cast<std::size_t>(c2)];
        }
    }
    std::vector<double> d(static_cast<std::size_t>(m));
    for (int row = m - 1; row >= 0; --row) {
        double rhs = sys[static_cast<std::size_t>(row)][static_cast<std::size_t>(m)];
        for (int c2 = row + 1; c2 < m; ++c2)
            rhs -= sys[static_cast<std::size_t>(row)][static_cast<std::size_t>(c2)] *
                   d[static_cast<std::size_t>(c2)];
        d[static_cast<std::size_t>(row)] =
            rhs / sys[static_cast<std::size_t>(row)][static_cast<std::size_t>(row)];
    }

    Stencil st;
    st.p = p;
    for (int j = -m; j <= m; ++j)
        if (j != 0) st.offsets.push_back(j);
    st.coefficients.assign(static_cast<std::size_t>(2 * m), 0.0);
    for (int j = 1; j <= m; ++j) {
        const double c = d[static_cast<std::size_t>(j - 1)] / j;
        st.coefficients[static_cast<std::size_t>(m + j - 1)] = c;   // offset +j
        st.coefficients[static_cast<std::size_t>(m - j)] = -c;      // offset -j
    }
    st.c_of_p = 0.0;
    for (double c : st.coefficients) st.c_of_p += c * c;
    return st;
}

}  // namespace qsemis
