#pragma once

#include "amop/complex_matrix.hpp"
#include "amop/prng.hpp"

#include <string>
#include <vector>

namespace amop::numlin {

struct NumlinError : std::runtime_error {
    explicit NumlinError(const std::string& what, int index = -1)
        : std::runtime_error(what), index(index) {}
    int index; // offending subdiagonal / pivot position, when meaningful
};

// Eigenvalues of a square matrix by Householder reduction to upper Hessenberg
// form followed by shifted (Wilkinson) QR iteration with deflation.
// Deterministic for fixed input.  tol scales the deflation threshold relative
// to machine epsilon (tol = 1 gives the standard criterion).  Numerically
// multiple eigenvalues carry the usual sqrt(eps) uncertainty of the
// nonsymmetric QR; use symtridiag_eigenvalues for self-adjoint tridiagonals.
std::vector<cplx> hessenberg_eigenvalues(const ComplexMatrix& M, double tol = 1.0);

struct EigenPair {
    cplx value;
    std::vector<cplx> vector; // unit 2-norm
    double residual = 0.0;    // ||Mv - value v||_2
    bool shift_perturbed = false;
    int iterations = 0;
};

EigenPair inverse_iteration(const ComplexMatrix& M, cplx shift, double tol = 1e-12,
                            int max_iter = 60);

// LU solve exploiting the bandwidth hint when present, dense otherwise.
std::vector<cplx> banded_solve(const ComplexMatrix& M, const std::vector<cplx>& b);

// Reusable banded LU factorisation (partial pivoting, LAPACK-style band storage).
class BandedLU {
public:
    BandedLU(const ComplexMatrix& M, int kl, int ku);
    void solve(std::vector<cplx>& b) const;
    void solve_adjoint(std::vector<cplx>& c) const;
    double min_pivot() const { return min_pivot_; }

private:
    int n_, kl_, ku_;
    std::vector<cplx> ab_; // (2kl+ku+1) x n
    std::vector<int> piv_;
    double min_pivot_ = 0.0;
    cplx& ab(int i, int j) { return ab_[static_cast<size_t>(i) * n_ + j]; }
    const cplx& ab(int i, int j) const { return ab_[static_cast<size_t>(i) * n_ + j]; }
};

// Singular values by one-sided Jacobi orthogonalisation, descending order.
std::vector<double> singular_values(const ComplexMatrix& M);

// Eigenvalues of a real symmetric tridiagonal matrix (implicit-shift QL),
// ascending order.  diag has length n, off has length n-1.
std::vector<double> symtridiag_eigenvalues(std::vector<double> diag, std::vector<double> off);

// Minimum-norm least-squares solve via Jacobi SVD (small systems).
std::vector<cplx> lstsq_minnorm(const ComplexMatrix& A, const std::vector<cplx>& b,
                                double rcond = 1e-12);

// test/support helpers
ComplexMatrix random_matrix(int n, Prng& prng);
ComplexMatrix random_unitary(int n, Prng& prng);

} // namespace amop::numlin
