#include "amop/fredholm.hpp"

#include <algorithm>
#include <cmath>

namespace amop::fredholm {

using lattice::LatticeWindow;
using lattice::LaurentSeries;

TanSeries tan_g_coefficients(const PhaseReducer& alpha, double beta, double gamma, int N,
                             int samples, double margin_req) {
    auto g = lattice::g_series(alpha, beta, gamma, N);
    const int M = samples;
    std::vector<cplx> vals(static_cast<size_t>(M));
    TanSeries out;
    out.pole_margin = 1e300;
    for (int m = 0; m < M; ++m) {
        double t = 2.0 * kPi * m / M;
        cplx gz = g.eval(cplx(std::cos(t), std::sin(t)));
        // distance to the poles pi(k + 1/2) of tan
        double re = gz.real() / kPi - 0.5;
        double dist = std::fabs(re - std::round(re)) * kPi;
        dist = std::hypot(dist, gz.imag());
        out.pole_margin = std::min(out.pole_margin, dist);
        vals[static_cast<size_t>(m)] = std::tan(gz);
        out.max_abs = std::max(out.max_abs, std::abs(vals[static_cast<size_t>(m)]));
    }
    if (out.pole_margin < margin_req)
        throw FredholmError("tan_g_coefficients: sampled values too close to a pole of tan");

    int J = std::min(2 * g.support() + 48, M / 2 - 1);
    LaurentSeries series(J);
    for (int j = -J; j <= J; ++j) {
        cplx s = 0.0;
        for (int m = 0; m < M; ++m) {
            double t = 2.0 * kPi * m * static_cast<double>(j) / M;
            s += vals[static_cast<size_t>(m)] * cplx(std::cos(t), -std::sin(t));
        }
        series.coeff(j) = s / static_cast<double>(M);
    }
    double peak = 0.0;
    for (const auto& z : series.c) peak = std::max(peak, std::abs(z));
    series.prune(std::max(2e-15, 5e-14 * peak));
    out.series = series;
    return out;
}

LaurentSeries kernel_band(const PhaseReducer& alpha, double beta, double gamma, int N,
                          int samples) {
    auto g = lattice::g_series(alpha, beta, gamma, N);
    auto quarter = g.scaled(0.25);
    const int M = samples;
    std::vector<cplx> vals(static_cast<size_t>(M));
    for (int m = 0; m < M; ++m) {
        double t = 2.0 * kPi * m / M;
        vals[static_cast<size_t>(m)] = std::tan(quarter.eval(cplx(std::cos(t), std::sin(t))));
    }
    int J = std::min(2 * g.support() + 48, M / 2 - 1);
    LaurentSeries series(J);
    for (int j = -J; j <= J; ++j) {
        cplx s = 0.0;
        for (int m = 0; m < M; ++m) {
            double t = 2.0 * kPi * m * static_cast<double>(j) / M;
            s += vals[static_cast<size_t>(m)] * cplx(std::cos(t), -std::sin(t));
        }
        series.coeff(j) = s / static_cast<double>(M);
    }
    double peak = 0.0;
    for (const auto& z : series.c) peak = std::max(peak, std::abs(z));
    series.prune(std::max(2e-15, 5e-14 * peak));
    return series;
}

namespace {

cplx gamma_n(const PhaseReducer& alpha, cplx Gamma, cplx G, long long n) {
    double lg = std::log(std::abs(G));
    double ag = std::arg(G);
    double mod = std::exp(2.0 * n * lg) * std::abs(Gamma);
    double ph = std::arg(Gamma) + 2.0 * std::fmod(ag * n, kPi) + kPi * alpha.reduce_mod2(2 * n * n);
    return mod * cplx(std::cos(ph), std::sin(ph));
}

// continuous square-root branch: t_n = sqrt(Gamma) G^n lambda^{n^2}
cplx t_branch(const PhaseReducer& alpha, cplx Gamma, cplx G, long long n) {
    cplx t0 = std::sqrt(Gamma);
    double lg = std::log(std::abs(G));
    double ag = std::arg(G);
    double mod = std::exp(n * lg) * std::abs(t0);
    double ph = std::arg(t0) + std::fmod(ag * n, 2.0 * kPi) + kPi * alpha.reduce_mod2(n * n);
    return mod * cplx(std::cos(ph), std::sin(ph));
}

} // namespace

Assembly assemble_H(const PhaseReducer& alpha, cplx Gamma, cplx G,
                    const LaurentSeries& band, int half_width, double guard) {
    if (std::abs(G) <= 1.0) throw FredholmError("assemble_H: requires |G| > 1");
    const int N = half_width;
    const int L = 2 * N + 1;
    const int sup = band.support();
    Assembly out;
    out.Gamma = Gamma;
    out.G = G;
    out.n_min = -N;
    out.n_max = N;
    out.H = ComplexMatrix(L, L);
    out.H.set_band_hint(sup, sup);
    out.core_lo = 1;
    out.core_hi = -1;
    for (int i = 0; i < L; ++i) {
        long long n = i - N;
        cplx gn = gamma_n(alpha, Gamma, G, n);
        double mag = std::abs(gn);
        cplx diag;
        if (mag > 1e6) {
            diag = cplx(0.0, -1.0);
        } else if (mag < 1e-6) {
            diag = cplx(0.0, 1.0);
        } else {
            if (std::abs(1.0 + gn) < guard)
                throw FredholmError("assemble_H: 1 + Gamma_n under guard at n = " +
                                    std::to_string(n));
            diag = cplx(0.0, 1.0) * (1.0 - gn) / (1.0 + gn);
            if (out.core_lo > out.core_hi) {
                out.core_lo = static_cast<int>(n);
            }
            out.core_hi = static_cast<int>(n);
        }
        out.H.at(i, i) += diag;
        for (int j = std::max(-sup, -N - static_cast<int>(n)); j <= std::min(sup, N - static_cast<int>(n)); ++j)
            out.H.at(i, i + j) += band.coeff(j);
    }
    return out;
}

std::pair<std::vector<cplx>, std::vector<cplx>> essential_spectrum_curve(
    const LaurentSeries& band, int samples) {
    std::vector<cplx> plus, minus;
    plus.reserve(static_cast<size_t>(samples) + 1);
    minus.reserve(static_cast<size_t>(samples) + 1);
    for (int m = 0; m <= samples; ++m) {
        double t = 2.0 * kPi * (m % samples) / samples;
        cplx v = band.eval(cplx(std::cos(t), std::sin(t)));
        plus.push_back(v + cplx(0.0, 1.0));
        minus.push_back(v - cplx(0.0, 1.0));
    }
    return {plus, minus};
}

KernelDimReport kernel_dimension(const ComplexMatrix& H, double gap_ratio_req) {
    auto sv = numlin::singular_values(H);
    KernelDimReport rep;
    double smax = sv.front();
    int n = static_cast<int>(sv.size());
    int dim = 0;
    for (int i = n - 1; i >= 0; --i) {
        if (sv[static_cast<size_t>(i)] < smax * 1e-8)
            ++dim;
        else
            break;
    }
    rep.dim = dim;
    int keep = std::min(n, std::max(6, dim + 3));
    rep.smallest.assign(sv.end() - keep, sv.end());
    std::reverse(rep.smallest.begin(), rep.smallest.end()); // ascending
    if (dim > 0) {
        double top_kernel = sv[static_cast<size_t>(n - dim)];       // largest kernel value
        double bottom_rest = sv[static_cast<size_t>(n - dim - 1)];  // smallest non-kernel
        rep.gap_ratio = bottom_rest / std::max(top_kernel, 1e-300);
        rep.clean_gap = rep.gap_ratio >= gap_ratio_req;
    } else {
        rep.gap_ratio = 0.0;
        rep.clean_gap = true;
    }
    return rep;
}

TransformReport kernel_transform_check(const PhaseReducer& alpha, const eigenmode::EigenMode& mode,
                                       cplx Gamma, const LaurentSeries& band, BranchPolicy policy,
                                       int flip_site) {
    const auto& xi = mode.xi;
    cplx G = mode.s();
    if (std::abs(G) <= 1.0) throw FredholmError("kernel_transform_check: requires |s| > 1");
    const int N = std::min(-xi.n_min, xi.n_max);

    LatticeWindow eta(-N, N);
    TransformReport rep;
    rep.min_denominator = 1e300;
    for (int n = -N; n <= N; ++n) {
        cplx t = t_branch(alpha, Gamma, G, n);
        if (policy == BranchPolicy::global_flip) t = -t;
        if (policy == BranchPolicy::single_flip && n == flip_site) t = -t;
        rep.min_denominator = std::min(rep.min_denominator, std::abs(t + 1.0 / t));
        eta.at(n) = (t + 1.0 / t) * xi.at(-n);
    }
    if (rep.min_denominator < 1e-8)
        throw FredholmError("kernel_transform_check: t_n + 1/t_n vanished on the window");

    const int sup = band.support();
    double r2 = 0.0, e2 = 0.0;
    rep.interior_lo = -N + sup;
    rep.interior_hi = N - sup;
    for (int n = rep.interior_lo; n <= rep.interior_hi; ++n) {
        cplx acc = 0.0;
        for (int j = -sup; j <= sup; ++j) acc += band.coeff(j) * eta.at(n + j);
        cplx gn = gamma_n(alpha, Gamma, G, n);
        cplx diag = (std::abs(gn) > 1e6)   ? cplx(0.0, -1.0)
                    : (std::abs(gn) < 1e-6) ? cplx(0.0, 1.0)
                                            : cplx(0.0, 1.0) * (1.0 - gn) / (1.0 + gn);
        acc += diag * eta.at(n);
        r2 += std::norm(acc);
        e2 += std::norm(eta.at(n));
    }
    rep.residual = std::sqrt(r2 / e2);
    return rep;
}

UnboundedReport unbounded_transform_check(const PhaseReducer& alpha, double beta, double gamma,
                                          cplx x, const LatticeWindow& xi,
                                          const LaurentSeries& band,
                                          const LaurentSeries& conj_kernel, double margin_req) {
    (void)beta;
    (void)gamma;
    UnboundedReport rep;
    // eigen-fit of D_x k D_x on the valid interior
    auto kd = lattice::apply_k(alpha, conj_kernel, lattice::apply_D(x, xi));
    auto dd = lattice::apply_D(x, kd);
    int lo = dd.valid_lo(), hi = dd.valid_hi();
    cplx num = 0.0;
    double den = 0.0;
    for (int n = lo; n <= hi; ++n) {
        num += std::conj(xi.at(n)) * dd.at(n);
        den += std::norm(xi.at(n));
    }
    rep.c = num / den;
    double r2 = 0.0, s2 = 0.0;
    for (int n = lo; n <= hi; ++n) {
        r2 += std::norm(dd.at(n) - rep.c * xi.at(n));
        s2 += std::norm(rep.c * xi.at(n));
    }
    rep.fit_residual = std::sqrt(r2 / s2);
    rep.c_modulus_deviation = std::fabs(std::abs(rep.c) - 1.0);

    rep.theta = std::arg(x) / (2.0 * kPi);
    rep.nu = std::arg(rep.c) / (2.0 * kPi);

    const int N = std::min(-xi.n_min, xi.n_max);
    LatticeWindow eta(-N, N);
    rep.singular_margin = 1e300;
    auto phase_of = [&](long long n) {
        double ph = alpha.reduce_mod2(n * n) + std::fmod(2.0 * rep.theta * n + rep.nu, 2.0);
        return ph; // (alpha n^2 + 2 theta n + nu) mod 2, up to a further fold
    };
    for (int n = -N; n <= N; ++n) {
        double ph = phase_of(n);
        double frac = ph / 2.0 - std::floor(ph / 2.0); // in [0,1): value mod 1 of ph/2... see below
        // distance of ph (mod 1) to 1/2 measures tan blowup
        double mod1 = ph - std::floor(ph);
        rep.singular_margin = std::min(rep.singular_margin, std::fabs(mod1 - 0.5));
        (void)frac;
        eta.at(n) = std::cos(kPi * ph) * xi.at(-n);
    }
    if (rep.singular_margin < margin_req)
        throw FredholmError("unbounded_transform_check: window meets the singular set");

    const int sup = band.support();
    double rr = 0.0, ee = 0.0;
    for (int n = -N + sup; n <= N - sup; ++n) {
        cplx acc = 0.0;
        for (int j = -sup; j <= sup; ++j) acc += band.coeff(j) * eta.at(n + j);
        acc += std::tan(kPi * phase_of(n)) * eta.at(n);
        rr += std::norm(acc);
        ee += std::norm(eta.at(n));
    }
    rep.residual = std::sqrt(rr / ee);
    return rep;
}

ComplexMatrix unbounded_H(const PhaseReducer& alpha, double theta, double nu,
                          const LaurentSeries& band, int half_width, double margin_req) {
    const int N = half_width;
    const int L = 2 * N + 1;
    const int sup = band.support();
    ComplexMatrix H(L, L);
    H.set_band_hint(sup, sup);
    for (int i = 0; i < L; ++i) {
        long long n = i - N;
        double ph = alpha.reduce_mod2(n * n) + std::fmod(2.0 * theta * n + nu, 2.0);
        double mod1 = ph - std::floor(ph);
        if (std::fabs(mod1 - 0.5) < margin_req)
            throw FredholmError("unbounded_H: diagonal pole inside the window at n = " +
                                std::to_string(n));
        H.at(i, i) += std::tan(kPi * ph);
        for (int j = std::max(-sup, -(i)); j <= std::min(sup, L - 1 - i); ++j)
            H.at(i, i + j) += band.coeff(j);
    }
    return H;
}

UnitarityReport k_unitarity_check(const PhaseReducer& alpha, double beta, double gamma, cplx x,
                                  int half_width, const LaurentSeries& kernel) {
    (void)beta;
    (void)gamma;
    const int N = half_width;
    const int L = 2 * N + 1;
    const int sup = kernel.support();
    ComplexMatrix M(L, L);
    M.set_band_hint(sup, sup);
    std::vector<cplx> wbar(static_cast<size_t>(L)), xpow(static_cast<size_t>(L));
    for (int i = 0; i < L; ++i) {
        long long n = i - N;
        wbar[static_cast<size_t>(i)] = std::conj(alpha.w_phase(n));
        double a = std::fmod(std::arg(x) * n, 2.0 * kPi);
        xpow[static_cast<size_t>(i)] = cplx(std::cos(a), std::sin(a)); // |x| = 1
    }
    for (int i = 0; i < L; ++i)
        for (int j = std::max(0, i - sup); j <= std::min(L - 1, i + sup); ++j)
            M.at(i, j) = xpow[static_cast<size_t>(i)] * xpow[static_cast<size_t>(j)] *
                         wbar[static_cast<size_t>(i)] * wbar[static_cast<size_t>(j)] *
                         kernel.coeff(i - j);

    auto eig = numlin::hessenberg_eigenvalues(M);
    UnitarityReport rep;
    const int collar = 5;
    std::vector<double> angles;
    for (const auto& z : eig) {
        double edge = 1.0;
        try {
            auto pair = numlin::inverse_iteration(M, z, 1e-9, 25);
            edge = 0.0;
            for (int i = 0; i < collar; ++i)
                edge += std::norm(pair.vector[static_cast<size_t>(i)]) +
                        std::norm(pair.vector[static_cast<size_t>(L - 1 - i)]);
        } catch (const numlin::NumlinError&) {
        }
        if (edge > 0.25) {
            ++rep.excluded;
            continue;
        }
        ++rep.kept;
        rep.eigenvalues.push_back(z);
        rep.max_modulus_deviation =
            std::max(rep.max_modulus_deviation, std::fabs(std::abs(z) - 1.0));
        angles.push_back(std::arg(z));
    }
    std::sort(angles.begin(), angles.end());
    if (angles.size() > 1) {
        for (size_t i = 1; i < angles.size(); ++i)
            rep.max_angle_gap = std::max(rep.max_angle_gap, angles[i] - angles[i - 1]);
        rep.max_angle_gap =
            std::max(rep.max_angle_gap, angles.front() + 2.0 * kPi - angles.back());
    } else {
        rep.max_angle_gap = 2.0 * kPi;
    }
    return rep;
}

CircleMode circle_mode(const PhaseReducer& alpha, double beta, cplx x_seed, int half_width,
                       int which_from_top) {
    const int N = half_width;
    auto H = spectral::truncation_matrix(alpha, 1.0, 1.0, x_seed, beta, N);
    std::vector<double> dg(static_cast<size_t>(H.rows)), off(static_cast<size_t>(H.rows) - 1, 1.0);
    for (int i = 0; i < H.rows; ++i) dg[static_cast<size_t>(i)] = H.at(i, i).real();
    auto ev = numlin::symtridiag_eigenvalues(dg, off);
    double energy = ev[ev.size() - 1 - static_cast<size_t>(which_from_top)];
    auto pair = numlin::inverse_iteration(H, energy, 1e-12, 60);

    const int L = 2 * N + 1;
    double wsum = 0.0, nsum = 0.0;
    for (int i = 0; i < L; ++i) {
        double w = std::norm(pair.vector[static_cast<size_t>(i)]);
        wsum += w;
        nsum += w * (i - N);
    }
    int n0 = static_cast<int>(std::lround(nsum / wsum));

    CircleMode mode;
    mode.energy = pair.value.real();
    mode.x = alpha.lambda_pow(-2LL * n0) * x_seed;
    mode.xi = LatticeWindow(-N, N);
    for (int n = -N; n <= N; ++n) {
        int idx = n + n0 + N;
        mode.xi.at(n) = (idx >= 0 && idx < L) ? pair.vector[static_cast<size_t>(idx)] : cplx(0.0);
    }
    double nn = mode.xi.norm2();
    for (auto& z : mode.xi.v) z /= nn;
    int nstar = 0;
    double mx = 0.0;
    for (int n = -N; n <= N; ++n)
        if (std::abs(mode.xi.at(n)) > mx) {
            mx = std::abs(mode.xi.at(n));
            nstar = n;
        }
    cplx ph = mode.xi.at(nstar) / std::abs(mode.xi.at(nstar));
    for (auto& z : mode.xi.v) z /= ph;
    const double floor = 1e-11 * mx;
    for (int n = nstar; n <= N; ++n)
        if (std::abs(mode.xi.at(n)) < floor) {
            for (int m = n + 1; m <= N; ++m) mode.xi.at(m) = 0.0;
            break;
        }
    for (int n = nstar; n >= -N; --n)
        if (std::abs(mode.xi.at(n)) < floor) {
            for (int m = n - 1; m >= -N; --m) mode.xi.at(m) = 0.0;
            break;
        }
    nn = mode.xi.norm2();
    for (auto& z : mode.xi.v) z /= nn;

    auto hx = lattice::apply_h(alpha, 1.0, 1.0, mode.x, beta, mode.xi);
    double r = 0.0;
    for (int n = hx.valid_lo() + 2; n <= hx.valid_hi() - 2; ++n)
        r += std::norm(hx.at(n) - mode.energy * mode.xi.at(n));
    mode.residual = std::sqrt(r);
    return mode;
}

} // namespace amop::fredholm
