#pragma once

#include <complex>
#include <vector>

namespace qsemis {

using cplx = std::complex<double>;

// Dense row-major complex matrix. Sized for kernel work (dimension <= 64),
// so the operations below are straightforward O(K^3) loops.
struct CMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<cplx> data;

    CMatrix() = default;
    CMatrix(int r, int c);

    cplx& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
    const cplx& operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }

    static CMatrix identity(int k);
};

CMatrix adjoint(const CMatrix& m);
CMatrix matmul(const CMatrix& a, const CMatrix& b);
std::vector<cplx> matvec(const CMatrix& m, const std::vector<cplx>& v);

// Eigendecomposition of a Hermitian matrix: ascending eigenvalues paired with
// the columns of a unitary matrix. Each column is scaled so its first
// non-negligible component is real and positive, making results reproducible.
struct HermitianEig {
    std::vector<double> values;
    CMatrix vectors;
};

// Cyclic Jacobi rotations; the input is symmetrized internally and must be
// Hermitian to 1e-8 relative to its largest entry.
HermitianEig eig_hermitian(const CMatrix& m);

// Symmetric central first-derivative stencil: f'(0) ~ (1/dt) sum_j c_j f(j*dt)
// with error O(dt^p). c_of_p is the sum of squared coefficients, which sets
// the variance amplification when the samples are noisy.
struct Stencil {
    int p = 0;
    std::vector<int> offsets;          // -p/2..-1, 1..p/2 ascending
    std::vector<double> coefficients;  // matched to offsets, antisymmetric
    double c_of_p = 0.0;
};

// Supported orders: p in {2, 4, 6, 8}.
Stencil stencil_coefficients(int p);

}  // namespace qsemis
