#include "amop/lattice.hpp"

#include <cmath>

namespace amop::lattice {

LatticeWindow apply_shift_u(const LatticeWindow& xi) {
    LatticeWindow out = xi;
    for (int n = xi.n_max; n > xi.n_min; --n) out.at(n) = xi.at(n - 1);
    out.at(xi.n_min) = 0.0;
    out.halo_lo = xi.halo_lo + 1;
    return out;
}

LatticeWindow apply_shift_u_star(const LatticeWindow& xi) {
    LatticeWindow out = xi;
    for (int n = xi.n_min; n < xi.n_max; ++n) out.at(n) = xi.at(n + 1);
    out.at(xi.n_max) = 0.0;
    out.halo_hi = xi.halo_hi + 1;
    return out;
}

LatticeWindow apply_diag_v(const PhaseReducer& alpha, const LatticeWindow& xi, long long power) {
    LatticeWindow out = xi;
    for (int n = xi.n_min; n <= xi.n_max; ++n) out.at(n) = alpha.v_phase(n, power) * xi.at(n);
    return out;
}

LatticeWindow apply_w(const PhaseReducer& alpha, const LatticeWindow& xi, int sign) {
    LatticeWindow out = xi;
    for (int n = xi.n_min; n <= xi.n_max; ++n) {
        cplx ph = alpha.w_phase(n);
        out.at(n) = (sign >= 0 ? ph : std::conj(ph)) * xi.at(n);
    }
    return out;
}

LatticeWindow apply_D(cplx x, const LatticeWindow& xi) {
    if (x == cplx(0.0)) throw LatticeError("apply_D: x must be nonzero");
    LatticeWindow out = xi;
    double lmod = std::log(std::abs(x));
    double arg = std::arg(x);
    int nbig = std::max(std::abs(xi.n_min), std::abs(xi.n_max));
    if (std::abs(lmod) * nbig > 700.0)
        throw LatticeError("apply_D: |x|^n overflows on this window; safe bound |n| <= " +
                           std::to_string(static_cast<int>(700.0 / std::max(1e-300, std::abs(lmod)))));
    for (int n = xi.n_min; n <= xi.n_max; ++n) {
        double m = std::exp(lmod * n);
        double a = std::fmod(arg * n, 2.0 * kPi);
        out.at(n) = m * cplx(std::cos(a), std::sin(a)) * xi.at(n);
    }
    return out;
}

LatticeWindow apply_h(const PhaseReducer& alpha, cplx gamma, cplx delta, cplx x, double beta,
                      const LatticeWindow& xi) {
    if (gamma == cplx(0.0) || delta == cplx(0.0)) throw LatticeError("apply_h: gamma, delta nonzero");
    cplx s = x * delta;
    LatticeWindow out = xi;
    cplx gi = 1.0 / gamma, si = 1.0 / s;
    for (int n = xi.n_min; n <= xi.n_max; ++n) {
        cplx ph = alpha.v_phase(n); // e^{-2 pi i alpha n}
        cplx acc = beta * (s * ph + si * std::conj(ph)) * xi.at(n);
        if (xi.contains(n - 1)) acc += gamma * xi.at(n - 1);
        if (xi.contains(n + 1)) acc += gi * xi.at(n + 1);
        out.at(n) = acc;
    }
    out.halo_lo = xi.halo_lo + 1;
    out.halo_hi = xi.halo_hi + 1;
    return out;
}

LaurentSeries g_series(const PhaseReducer& alpha, double beta, double gamma, int N) {
    if (beta <= 1.0) throw LatticeError("g_series: requires beta > 1");
    if (gamma <= 1.0 / beta || gamma >= beta)
        throw LatticeError("g_series: gamma outside (1/beta, beta)");
    if (N < 1) throw LatticeError("g_series: N must be >= 1");
    LaurentSeries g(N);
    double bp = 1.0, gp = 1.0;
    for (int n = 1; n <= N; ++n) {
        bp /= beta;
        gp *= gamma;
        double sn = std::sin(kPi * alpha.reduce_mod2(n));
        if (std::abs(sn) < 1e-14)
            throw LatticeError("g_series: sin(pi alpha n) vanished at n = " + std::to_string(n));
        double base = ((n & 1) ? -1.0 : 1.0) / (n * sn) * bp;
        g.coeff(n) = base * gp;
        g.coeff(-n) = base / gp;
    }
    return g;
}

LaurentSeries exp_ig(const LaurentSeries& g, int M, int out_half_width) {
    int sup = g.support();
    if (M <= 4 * sup) throw LatticeError("exp_ig: sample count must exceed 4x the series support");
    int J = out_half_width > 0 ? out_half_width : 2 * sup + 48;
    J = std::min(J, M / 2 - 1);

    std::vector<cplx> vals(M);
    for (int m = 0; m < M; ++m) {
        double t = 2.0 * kPi * m / M;
        cplx gz = g.eval(cplx(std::cos(t), std::sin(t)));
        vals[m] = std::exp(cplx(0.0, 1.0) * gz);
    }
    LaurentSeries out(J);
    for (int j = -J; j <= J; ++j) {
        cplx s = 0.0;
        for (int m = 0; m < M; ++m) {
            double t = 2.0 * kPi * m * static_cast<double>(j) / M;
            s += vals[m] * cplx(std::cos(t), -std::sin(t));
        }
        out.coeff(j) = s / static_cast<double>(M);
    }
    double peak = 0.0;
    for (const auto& z : out.c) peak = std::max(peak, std::abs(z));
    out.prune(std::max(2e-15, 5e-14 * peak)); // below the quadrature noise floor
    return out;
}

LaurentSeries conjugator_kernel(const PhaseReducer& alpha, double beta, double gamma, int N,
                                int sample_count) {
    auto g = g_series(alpha, beta, gamma, N);
    return exp_ig(g.scaled(-0.5), sample_count);
}

LatticeWindow apply_k(const PhaseReducer& alpha, const LaurentSeries& kernel,
                      const LatticeWindow& xi) {
    int sup = kernel.support();
    LatticeWindow out = xi;
    std::vector<cplx> wbar(static_cast<size_t>(xi.size()));
    for (int n = xi.n_min; n <= xi.n_max; ++n)
        wbar[static_cast<size_t>(n - xi.n_min)] = std::conj(alpha.w_phase(n));
    for (int n = xi.n_min; n <= xi.n_max; ++n) {
        cplx acc = 0.0;
        int jlo = std::max(-sup, n - xi.n_max), jhi = std::min(sup, n - xi.n_min);
        for (int j = jlo; j <= jhi; ++j)
            acc += kernel.coeff(j) * wbar[static_cast<size_t>(n - j - xi.n_min)] * xi.at(n - j);
        out.at(n) = wbar[static_cast<size_t>(n - xi.n_min)] * acc;
    }
    out.halo_lo = xi.halo_lo + sup;
    out.halo_hi = xi.halo_hi + sup;
    return out;
}

LatticeWindow apply_k(const PhaseReducer& alpha, double beta, double gamma,
                      const LatticeWindow& xi, int series_cutoff, int sample_count) {
    auto kernel = conjugator_kernel(alpha, beta, gamma, series_cutoff, sample_count);
    return apply_k(alpha, kernel, xi);
}

IntertwineReport intertwine_residual(const PhaseReducer& alpha, double gamma, double delta,
                                     double beta, int trials, std::uint64_t seed, int window_half,
                                     int series_cutoff) {
    if (gamma <= 1.0 / beta || gamma >= beta) throw LatticeError("intertwine_residual: gamma range");
    if (delta <= 1.0) throw LatticeError("intertwine_residual: requires delta > 1");
    auto kernel = conjugator_kernel(alpha, beta, gamma, series_cutoff, 2048);

    Prng prng(seed);
    IntertwineReport rep;
    rep.trials = trials;
    const int N = window_half;
    const int support_half = N / 4;
    for (int t = 0; t < trials; ++t) {
        LatticeWindow xi(-N, N);
        for (int n = -support_half; n <= support_half; ++n) xi.at(n) = prng.complex_box();
        double scale = xi.sup_norm();
        if (scale == 0.0) continue;

        auto lhs = apply_h(alpha, gamma / delta, delta, 1.0, beta, apply_k(alpha, kernel, xi));
        auto rhs = apply_k(alpha, kernel, apply_h(alpha, gamma * delta, delta, 1.0, beta, xi));
        int lo = std::max(lhs.valid_lo(), rhs.valid_lo());
        int hi = std::min(lhs.valid_hi(), rhs.valid_hi());
        rep.interior_lo = lo;
        rep.interior_hi = hi;
        double worst = 0.0;
        for (int n = lo; n <= hi; ++n) worst = std::max(worst, std::abs(lhs.at(n) - rhs.at(n)));
        rep.max_residual = std::max(rep.max_residual, worst / scale);
    }
    return rep;
}

} // namespace amop::lattice
