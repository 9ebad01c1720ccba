#include "doctest.h"

#include "amop/lattice.hpp"
#include "amop/prng.hpp"

#include <cmath>

using namespace amop;
using namespace amop::lattice;

namespace {

const PhaseReducer kAlpha = PhaseReducer::golden();

// independent reference for alpha*k mod 2: exact 128-bit modular arithmetic
// over the Fibonacci convergent F_86/F_87 (|alpha - p/q| < 1/(sqrt5 q^2) ~ 3e-36)
double mod2_oracle(long long k) {
    unsigned long long f0 = 1, f1 = 1;
    for (int i = 2; i <= 87; ++i) {
        unsigned long long t = f0 + f1;
        f0 = f1;
        f1 = t;
    }
    unsigned long long p = f0, q = f1; // F_86, F_87
    bool neg = k < 0;
    unsigned long long ku = neg ? static_cast<unsigned long long>(-k) : static_cast<unsigned long long>(k);
    unsigned __int128 prod = static_cast<unsigned __int128>(p) * ku;
    unsigned __int128 rem = prod % (static_cast<unsigned __int128>(2) * q);
    double r = static_cast<double>(static_cast<unsigned long long>(rem)) / static_cast<double>(q);
    if (neg) r = -r;
    r = std::fmod(r, 2.0);
    if (r >= 1.0) r -= 2.0;
    if (r < -1.0) r += 2.0;
    return r;
}

LatticeWindow random_window(Prng& prng, int N, int support) {
    LatticeWindow w(-N, N);
    for (int n = -support; n <= support; ++n) w.at(n) = prng.complex_box();
    return w;
}

} // namespace

TEST_CASE("shift moves the delta and is unitary on the interior") {
    auto d0 = LatticeWindow::delta(0, -5, 5);
    auto shifted = apply_shift_u(d0);
    CHECK(std::abs(shifted.at(1) - cplx(1.0)) == 0.0);
    CHECK(shifted.halo_lo == 1);

    Prng prng(1);
    auto xi = random_window(prng, 10, 8);
    auto round = apply_shift_u_star(apply_shift_u(xi));
    for (int n = round.valid_lo(); n <= round.valid_hi(); ++n)
        CHECK(std::abs(round.at(n) - xi.at(n)) == 0.0);

    auto multi = xi;
    for (int k = 0; k < 3; ++k) multi = apply_shift_u(multi);
    for (int n = multi.valid_lo(); n <= multi.valid_hi(); ++n)
        CHECK(std::abs(multi.at(n) - xi.at(n - 3)) == 0.0);
}

TEST_CASE("diagonal phase operators") {
    Prng prng(2);
    auto xi = random_window(prng, 12, 12);

    auto id = apply_diag_v(kAlpha, xi, 0);
    for (int n = -12; n <= 12; ++n) CHECK(std::abs(id.at(n) - xi.at(n)) == 0.0);

    auto vd = apply_diag_v(kAlpha, xi);
    for (int n = -12; n <= 12; ++n) CHECK(std::abs(std::abs(vd.at(n)) - std::abs(xi.at(n))) < 1e-15);

    auto back = apply_diag_v(kAlpha, vd, -1);
    for (int n = -12; n <= 12; ++n) CHECK(std::abs(back.at(n) - xi.at(n)) < 1e-15);

    auto wd = apply_w(kAlpha, xi);
    CHECK(std::abs(wd.at(0) - xi.at(0)) == 0.0);
    for (int n = -12; n <= 12; ++n) CHECK(std::abs(std::abs(wd.at(n)) - std::abs(xi.at(n))) < 1e-15);

    // w twice multiplies by lambda^{2n^2} = v^{-n} diagonal at site n
    auto ww = apply_w(kAlpha, wd);
    for (int n : {-12, -7, -1, 0, 3, 9, 12}) {
        cplx expect = kAlpha.v_phase(n, -n) * xi.at(n);
        CHECK(std::abs(ww.at(n) - expect) < 1e-14);
    }

    // diagonal operators commute exactly
    auto ab = apply_w(kAlpha, apply_diag_v(kAlpha, xi));
    auto ba = apply_diag_v(kAlpha, apply_w(kAlpha, xi));
    for (int n = -12; n <= 12; ++n) CHECK(std::abs(ab.at(n) - ba.at(n)) < 1e-15);
}

TEST_CASE("geometric diagonal D_x") {
    Prng prng(3);
    auto xi = random_window(prng, 10, 10);

    auto one = apply_D(1.0, xi);
    for (int n = -10; n <= 10; ++n) CHECK(std::abs(one.at(n) - xi.at(n)) == 0.0);

    cplx x(0.8, 0.45);
    auto round = apply_D(1.0 / x, apply_D(x, xi));
    for (int n = -10; n <= 10; ++n) CHECK(std::abs(round.at(n) - xi.at(n)) < 1e-13);

    auto d3 = apply_D(2.0, LatticeWindow::delta(3, -5, 5));
    CHECK(std::abs(d3.at(3) - cplx(8.0)) < 1e-14);

    LatticeWindow big(-4000, 4000);
    CHECK_THROWS_AS(apply_D(2.0, big), LatticeError);
}

TEST_CASE("almost Mathieu action") {
    Prng prng(4);
    auto xi = random_window(prng, 15, 13);

    // beta = 0: pure hopping
    auto free0 = apply_h(kAlpha, 1.0, 1.0, 1.0, 0.0, xi);
    for (int n = free0.valid_lo(); n <= free0.valid_hi(); ++n)
        CHECK(std::abs(free0.at(n) - (xi.get(n - 1) + xi.get(n + 1))) == 0.0);

    // delta = x = 1: potential 2 beta cos(2 pi alpha n)
    double beta = 1.7;
    auto hx = apply_h(kAlpha, 1.0, 1.0, 1.0, beta, xi);
    for (int n = hx.valid_lo(); n <= hx.valid_hi(); ++n) {
        cplx expect = xi.get(n - 1) + xi.get(n + 1) +
                      2.0 * beta * std::cos(2.0 * kPi * kAlpha.reduce_mod2(n) / 2.0 * 2.0) * xi.at(n);
        // direct cosine evaluation oracle
        cplx direct = xi.get(n - 1) + xi.get(n + 1) +
                      2.0 * beta * std::cos(kPi * kAlpha.reduce_mod2(2 * n)) * xi.at(n);
        CHECK(std::abs(hx.at(n) - direct) < 1e-13 * (1.0 + std::abs(expect)));
    }

    // action on the delta: three-point result
    cplx delta_par(1.3, 0.0);
    auto hd = apply_h(kAlpha, 1.0, delta_par, 1.0, beta, LatticeWindow::delta(0, -5, 5));
    CHECK(std::abs(hd.at(-1) - cplx(1.0)) < 1e-15);
    CHECK(std::abs(hd.at(1) - cplx(1.0)) < 1e-15);
    CHECK(std::abs(hd.at(0) - beta * (delta_par + 1.0 / delta_par)) < 1e-14);
}

TEST_CASE("phase twist of the potential equals a conjugating shift") {
    // h(x delta) = u^{-m} h(lambda^{2m} x delta) u^m on windows
    Prng prng(5);
    auto xi = random_window(prng, 14, 10);
    double beta = 2.0;
    cplx delta(1.4, 0.0);
    for (int m : {1, 2}) {
        auto lhs = apply_h(kAlpha, 1.0, delta, 1.0, beta, xi);
        auto inner = xi;
        for (int k = 0; k < m; ++k) inner = apply_shift_u(inner);
        auto mid = apply_h(kAlpha, 1.0, delta, kAlpha.lambda_pow(2 * m), beta, inner);
        for (int k = 0; k < m; ++k) mid = apply_shift_u_star(mid);
        for (int n = std::max(lhs.valid_lo(), mid.valid_lo());
             n <= std::min(lhs.valid_hi(), mid.valid_hi()); ++n)
            CHECK(std::abs(lhs.at(n) - mid.at(n)) < 1e-14);
    }
}

TEST_CASE("inner-automorphism series coefficients") {
    double beta = 2.0;
    auto g = g_series(kAlpha, beta, 1.0, 40);
    double expect1 = -1.0 / (beta * std::sin(kPi * kAlpha.value()));
    CHECK(std::abs(g.coeff(1) - expect1) < 1e-15);
    CHECK(std::abs(g.coeff(0)) == 0.0);
    for (int n = 1; n <= 40; ++n) CHECK(std::abs(g.coeff(n) - g.coeff(-n)) == 0.0);

    auto gbig = g_series(kAlpha, 60.0, 1.0, 20);
    double mx = 0.0;
    for (int n = 1; n <= 20; ++n) mx = std::max(mx, std::abs(gbig.coeff(n)));
    CHECK(mx < 2e-2);

    // rational frequency makes sin(pi alpha n) vanish
    CHECK_THROWS_AS(g_series(PhaseReducer::rational(1, 2), beta, 1.0, 10), LatticeError);

    // gamma asymmetry: c_n gets gamma^n, c_{-n} gets gamma^{-n}
    auto gg = g_series(kAlpha, beta, 1.2, 10);
    for (int n = 1; n <= 10; ++n)
        CHECK(std::abs(gg.coeff(n) / gg.coeff(-n) - std::pow(1.2, 2 * n)) < 1e-10 * std::pow(1.2, 2 * n));
}

TEST_CASE("circle-sampled exponential of a series") {
    LaurentSeries zero(0);
    auto e0 = exp_ig(zero, 64);
    CHECK(std::abs(e0.coeff(0) - cplx(1.0)) < 1e-14);
    CHECK(e0.support() == 0);

    auto g = g_series(kAlpha, 2.0, 1.0, 50);
    auto E = exp_ig(g, 1024);
    double parseval = 0.0;
    for (int j = -E.J; j <= E.J; ++j) parseval += std::norm(E.coeff(j));
    CHECK(std::abs(parseval - 1.0) < 1e-12);

    // E * reverse(conj(E)) = delta (unitarity of the symbol)
    int S = E.support();
    for (int d : {0, 1, 2, 5, 11}) {
        cplx s = 0.0;
        for (int j = -S; j <= S; ++j) s += E.coeff(j + d) * std::conj(E.coeff(j));
        CHECK(std::abs(s - (d == 0 ? cplx(1.0) : cplx(0.0))) < 1e-12);
    }

    CHECK_THROWS_AS(exp_ig(g, 4 * g.support()), LatticeError);
}

TEST_CASE("conjugator columns and unitarity") {
    double beta = 2.0;

    // beta large: kernel ~ delta, so k is nearly the pure quadratic phase
    {
        auto kernel = conjugator_kernel(kAlpha, 500.0, 1.0, 30, 512);
        Prng prng(6);
        auto xi = random_window(prng, 20, 10);
        auto kx = apply_k(kAlpha, kernel, xi);
        for (int n = kx.valid_lo(); n <= kx.valid_hi(); ++n) {
            cplx expect = std::conj(kAlpha.w_phase(n) * kAlpha.w_phase(n)) * xi.at(n);
            CHECK(std::abs(kx.at(n) - expect) < 5e-3 * (1.0 + std::abs(xi.at(n))));
        }
    }

    auto kernel = conjugator_kernel(kAlpha, beta, 1.0, 60, 2048);

    // gamma = 1: norm preserved on compactly supported vectors
    Prng prng(7);
    LatticeWindow xi(-220, 220);
    for (int n = -40; n <= 40; ++n) xi.at(n) = prng.complex_box();
    auto kx = apply_k(kAlpha, kernel, xi);
    double n_in = xi.norm2(), n_out = 0.0;
    for (int n = kx.n_min; n <= kx.n_max; ++n) n_out += std::norm(kx.at(n));
    CHECK(std::abs(std::sqrt(n_out) - n_in) < 1e-10 * n_in);

    // column from the delta matches the direct convolution formula
    auto col = apply_k(kAlpha, kernel, LatticeWindow::delta(0, -150, 150));
    for (int n : {-9, -2, 0, 1, 17}) {
        cplx expect = std::conj(kAlpha.w_phase(n)) * kernel.coeff(n) * std::conj(kAlpha.w_phase(0));
        CHECK(std::abs(col.at(n) - expect) < 1e-15);
    }
}

TEST_CASE("intertwining of the two parameter lines") {
    auto rep = intertwine_residual(kAlpha, 1.0, 1.3, 2.0, 20, 424242);
    CHECK(rep.max_residual < 1e-8);
    CHECK(rep.max_residual > 0.0);

    // short series cutoff: truncation dominates and decays faster in beta
    auto r2 = intertwine_residual(kAlpha, 1.0, 1.3, 2.0, 5, 11, 220, 6);
    auto r4 = intertwine_residual(kAlpha, 1.0, 1.3, 4.0, 5, 11, 220, 6);
    CHECK(r4.max_residual < r2.max_residual);
}

TEST_CASE("quadratic phase accuracy") {
    for (long long n : {3LL, 100LL, 5000LL, 250000LL, 1000000LL}) {
        cplx ph = kAlpha.w_phase(n);
        CHECK(std::abs(std::abs(ph) - 1.0) < 1e-15);
        double r = kAlpha.reduce_mod2(n * n);
        double ro = mod2_oracle(n * n);
        cplx a(std::cos(kPi * r), std::sin(kPi * r));
        cplx b(std::cos(kPi * ro), std::sin(kPi * ro));
        CHECK(std::abs(a - b) < 1e-12);
    }
}

TEST_CASE("diophantine defect of the golden mean is small") {
    CHECK(kAlpha.diophantine_defect(200) < 0.1);
    CHECK(kAlpha.diophantine_defect(1000) < kAlpha.diophantine_defect(60));
}
