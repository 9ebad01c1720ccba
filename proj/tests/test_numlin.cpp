#include "doctest.h"

#include "amop/numlin.hpp"
#include "amop/phase.hpp"
#include "amop/prng.hpp"

#include <algorithm>
#include <complex>

using namespace amop;
using namespace amop::numlin;

namespace {

// multiset comparison up to tolerance by greedy matching
double multiset_dist(std::vector<cplx> a, std::vector<cplx> b) {
    REQUIRE(a.size() == b.size());
    double worst = 0.0;
    for (const auto& x : a) {
        size_t best = 0;
        double bd = 1e300;
        for (size_t k = 0; k < b.size(); ++k) {
            double d = std::abs(x - b[k]);
            if (d < bd) {
                bd = d;
                best = k;
            }
        }
        worst = std::max(worst, bd);
        b.erase(b.begin() + best);
    }
    return worst;
}

ComplexMatrix diag3(cplx a, cplx b, cplx c) {
    ComplexMatrix M(3, 3);
    M.at(0, 0) = a;
    M.at(1, 1) = b;
    M.at(2, 2) = c;
    return M;
}

} // namespace

TEST_CASE("eigenvalues of diagonal and rotation matrices") {
    auto e = hessenberg_eigenvalues(diag3(3.0, cplx(0, 2), -1.0));
    CHECK(multiset_dist(e, {cplx(3), cplx(0, 2), cplx(-1)}) < 1e-14);

    ComplexMatrix R(2, 2);
    R.at(0, 1) = -1.0;
    R.at(1, 0) = 1.0;
    auto er = hessenberg_eigenvalues(R);
    CHECK(multiset_dist(er, {cplx(0, 1), cplx(0, -1)}) < 1e-14);
}

TEST_CASE("eigenvalue sum equals trace on random 6x6") {
    Prng prng(2024);
    for (int rep = 0; rep < 5; ++rep) {
        ComplexMatrix M = random_matrix(6, prng);
        auto e = hessenberg_eigenvalues(M);
        cplx s = 0.0;
        for (auto z : e) s += z;
        CHECK(std::abs(s - M.trace()) < 1e-10);
    }
}

TEST_CASE("eigenvalues invariant under unitary similarity") {
    Prng prng(7);
    ComplexMatrix M = random_matrix(12, prng);
    ComplexMatrix U = random_unitary(12, prng);
    ComplexMatrix UH = U.adjoint();
    // B = U M U^H
    ComplexMatrix T(12, 12), B(12, 12);
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j) {
            cplx s = 0.0;
            for (int k = 0; k < 12; ++k) s += U.at(i, k) * M.at(k, j);
            T.at(i, j) = s;
        }
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j) {
            cplx s = 0.0;
            for (int k = 0; k < 12; ++k) s += T.at(i, k) * UH.at(k, j);
            B.at(i, j) = s;
        }
    CHECK(multiset_dist(hessenberg_eigenvalues(M), hessenberg_eigenvalues(B)) < 1e-8);
}

TEST_CASE("inverse iteration: diagonal case picks the nearest eigenvalue") {
    ComplexMatrix M(2, 2);
    M.at(0, 0) = 1.0;
    M.at(1, 1) = 5.0;
    auto p = inverse_iteration(M, 4.9);
    CHECK(std::abs(p.value - cplx(5.0)) < 1e-12);
    CHECK(std::abs(std::abs(p.vector[1]) - 1.0) < 1e-10);
}

TEST_CASE("inverse iteration: free Laplacian truncation sine modes") {
    // tridiagonal(1, 0, 1) of size 5: eigenvalues 2cos(k pi/6), vectors sin(k pi n/6)
    int n = 5;
    ComplexMatrix M(n, n);
    M.set_band_hint(1, 1);
    for (int i = 0; i + 1 < n; ++i) {
        M.at(i, i + 1) = 1.0;
        M.at(i + 1, i) = 1.0;
    }
    double target = 2.0 * std::cos(kPi / 6.0);
    auto p = inverse_iteration(M, target + 1e-3);
    CHECK(std::abs(p.value - target) < 1e-10);
    std::vector<double> exact(n);
    double nn = 0.0;
    for (int i = 0; i < n; ++i) {
        exact[i] = std::sin(kPi * (i + 1) / 6.0);
        nn += exact[i] * exact[i];
    }
    nn = std::sqrt(nn);
    cplx phase = p.vector[0] / (exact[0] / nn);
    for (int i = 0; i < n; ++i) CHECK(std::abs(p.vector[i] - phase * exact[i] / nn) < 1e-9);
}

TEST_CASE("inverse iteration refines eigenvalues from the QR kernel") {
    Prng prng(99);
    ComplexMatrix M = random_matrix(8, prng);
    auto eigs = hessenberg_eigenvalues(M);
    for (int k = 0; k < 3; ++k) {
        auto p = inverse_iteration(M, eigs[k] + cplx(1e-7, -1e-7), 1e-11, 80);
        CHECK(p.residual < 1e-9 * M.frob_norm());
    }
}

TEST_CASE("banded solve: identity and bidiagonal") {
    int n = 6;
    ComplexMatrix I(n, n);
    I.set_band_hint(0, 0);
    for (int i = 0; i < n; ++i) I.at(i, i) = 1.0;
    std::vector<cplx> b(n);
    for (int i = 0; i < n; ++i) b[i] = cplx(i, -i);
    auto x = banded_solve(I, b);
    for (int i = 0; i < n; ++i) CHECK(std::abs(x[i] - b[i]) < 1e-15);

    // lower bidiagonal with unit diagonal: forward substitution
    ComplexMatrix L(n, n);
    L.set_band_hint(1, 0);
    for (int i = 0; i < n; ++i) L.at(i, i) = 1.0;
    for (int i = 1; i < n; ++i) L.at(i, i - 1) = cplx(0.5, 0.25);
    auto y = banded_solve(L, b);
    std::vector<cplx> fwd(n);
    for (int i = 0; i < n; ++i) fwd[i] = b[i] - (i > 0 ? cplx(0.5, 0.25) * fwd[i - 1] : cplx(0.0));
    for (int i = 0; i < n; ++i) CHECK(std::abs(y[i] - fwd[i]) < 1e-13);
}

TEST_CASE("banded solve: random tridiagonal 200x200 residual") {
    Prng prng(5);
    int n = 200;
    ComplexMatrix M(n, n);
    M.set_band_hint(1, 1);
    for (int i = 0; i < n; ++i) {
        M.at(i, i) = prng.complex_box() + cplx(3.0, 0.0);
        if (i + 1 < n) {
            M.at(i, i + 1) = prng.complex_box();
            M.at(i + 1, i) = prng.complex_box();
        }
    }
    std::vector<cplx> b(n);
    for (auto& z : b) z = prng.complex_box();
    auto x = banded_solve(M, b);
    auto mx = M.matvec(x);
    double res = 0.0, xn = 0.0, bn = 0.0;
    for (int i = 0; i < n; ++i) {
        res += std::norm(mx[i] - b[i]);
        xn += std::norm(x[i]);
        bn += std::norm(b[i]);
    }
    res = std::sqrt(res);
    CHECK(res < 1e-10 * (M.frob_norm() * std::sqrt(xn) + std::sqrt(bn)));
}

TEST_CASE("banded solve recovers rhs on many random banded systems") {
    Prng prng(11);
    for (int rep = 0; rep < 500; ++rep) {
        int n = 4 + prng.index(24);
        int kl = prng.index(3), ku = prng.index(3);
        ComplexMatrix M(n, n);
        M.set_band_hint(kl, ku);
        for (int i = 0; i < n; ++i)
            for (int j = std::max(0, i - kl); j <= std::min(n - 1, i + ku); ++j)
                M.at(i, j) = prng.complex_box() + (i == j ? cplx(4.0, 0.0) : cplx(0.0));
        std::vector<cplx> b(n);
        for (auto& z : b) z = prng.complex_box();
        auto x = banded_solve(M, b);
        auto mx = M.matvec(x);
        double res = 0.0, bn = 0.0;
        for (int i = 0; i < n; ++i) {
            res += std::norm(mx[i] - b[i]);
            bn += std::norm(b[i]);
        }
        CHECK(std::sqrt(res) < 1e-10 * std::max(1.0, std::sqrt(bn)));
    }
}

TEST_CASE("singular values: closed forms and Gram oracle") {
    ComplexMatrix D(2, 2);
    D.at(0, 0) = 3.0;
    D.at(1, 1) = -4.0;
    auto sv = singular_values(D);
    CHECK(std::abs(sv[0] - 4.0) < 1e-14);
    CHECK(std::abs(sv[1] - 3.0) < 1e-14);

    Prng prng(3);
    auto U = random_unitary(4, prng);
    auto svu = singular_values(U);
    for (double s : svu) CHECK(std::abs(s - 1.0) < 1e-12);

    // squares of singular values equal eigenvalues of M^H M
    ComplexMatrix M = random_matrix(7, prng);
    auto MH = M.adjoint();
    ComplexMatrix G(7, 7);
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) {
            cplx s = 0.0;
            for (int k = 0; k < 7; ++k) s += MH.at(i, k) * M.at(k, j);
            G.at(i, j) = s;
        }
    auto ge = hessenberg_eigenvalues(G);
    std::vector<double> ger(7);
    for (int i = 0; i < 7; ++i) ger[i] = ge[i].real();
    std::sort(ger.begin(), ger.end(), std::greater<double>());
    auto svm = singular_values(M);
    for (int i = 0; i < 7; ++i) CHECK(std::abs(svm[i] * svm[i] - ger[i]) < 1e-9);
}

TEST_CASE("singular values invariant under one-sided unitaries") {
    Prng prng(17);
    ComplexMatrix M = random_matrix(6, prng);
    ComplexMatrix U = random_unitary(6, prng);
    ComplexMatrix UM(6, 6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            cplx s = 0.0;
            for (int k = 0; k < 6; ++k) s += U.at(i, k) * M.at(k, j);
            UM.at(i, j) = s;
        }
    auto a = singular_values(M);
    auto b = singular_values(UM);
    for (int i = 0; i < 6; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-9);
}

TEST_CASE("symmetric tridiagonal eigenvalues: Laplacian closed form") {
    int n = 50;
    std::vector<double> d(n, 0.0), e(n - 1, 1.0);
    auto ev = symtridiag_eigenvalues(d, e);
    for (int k = 1; k <= n; ++k) {
        double exact = 2.0 * std::cos(kPi * k / (n + 1));
        CHECK(std::abs(ev[n - k] - exact) < 1e-12);
    }
}

TEST_CASE("least squares min-norm solve") {
    Prng prng(23);
    ComplexMatrix A(6, 3);
    for (auto& z : A.a) z = prng.complex_box();
    std::vector<cplx> xtrue = {cplx(1, 2), cplx(-0.5, 0.1), cplx(0, -1)};
    std::vector<cplx> b(6, cplx(0.0));
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 3; ++j) b[i] += A.at(i, j) * xtrue[j];
    auto x = lstsq_minnorm(A, b);
    for (int j = 0; j < 3; ++j) CHECK(std::abs(x[j] - xtrue[j]) < 1e-10);
}

TEST_CASE("non-square eigenvalue request is rejected") {
    ComplexMatrix M(2, 3);
    CHECK_THROWS_AS(hessenberg_eigenvalues(M), NumlinError);
}
