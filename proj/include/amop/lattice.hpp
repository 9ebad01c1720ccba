#pragma once

#include "amop/phase.hpp"
#include "amop/prng.hpp"

#include <stdexcept>
#include <vector>

namespace amop::lattice {

struct LatticeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Finite window of a two-sided sequence.  Shifts and convolutions leave a
// halo of invalid entries at the edges; checks read the valid interior only.
struct LatticeWindow {
    int n_min = 0;
    int n_max = -1;
    int halo_lo = 0;
    int halo_hi = 0;
    std::vector<cplx> v;

    LatticeWindow() = default;
    LatticeWindow(int lo, int hi) : n_min(lo), n_max(hi), v(static_cast<size_t>(hi - lo + 1)) {
        if (lo > hi) throw LatticeError("LatticeWindow: n_min > n_max");
    }

    static LatticeWindow delta(int at, int lo, int hi) {
        LatticeWindow w(lo, hi);
        w.at(at) = 1.0;
        return w;
    }

    int size() const { return n_max - n_min + 1; }
    bool contains(int n) const { return n >= n_min && n <= n_max; }
    cplx& at(int n) { return v[static_cast<size_t>(n - n_min)]; }
    const cplx& at(int n) const { return v[static_cast<size_t>(n - n_min)]; }
    cplx get(int n) const { return contains(n) ? at(n) : cplx(0.0); }

    int valid_lo() const { return n_min + halo_lo; }
    int valid_hi() const { return n_max - halo_hi; }

    double norm2() const {
        double s = 0.0;
        for (const auto& z : v) s += std::norm(z);
        return std::sqrt(s);
    }
    double sup_norm() const {
        double s = 0.0;
        for (const auto& z : v) s = std::max(s, std::abs(z));
        return s;
    }
};

// Laurent polynomial sum c_j u^j, j in [-J, J]
struct LaurentSeries {
    int J = 0;
    std::vector<cplx> c; // index j + J

    LaurentSeries() : c(1, cplx(0.0)) {}
    explicit LaurentSeries(int half_width) : J(half_width), c(2 * half_width + 1, cplx(0.0)) {
        if (half_width < 0) throw LatticeError("LaurentSeries: negative half width");
    }

    cplx& coeff(int j) { return c[static_cast<size_t>(j + J)]; }
    cplx coeff(int j) const { return (j < -J || j > J) ? cplx(0.0) : c[static_cast<size_t>(j + J)]; }

    int support() const {
        int s = 0;
        for (int j = -J; j <= J; ++j)
            if (coeff(j) != cplx(0.0)) s = std::max(s, std::abs(j));
        return s;
    }

    void prune(double floor) {
        for (auto& z : c)
            if (std::abs(z) < floor) z = 0.0;
    }

    cplx eval(cplx z) const {
        cplx zp = 1.0, zm = 1.0, s = coeff(0);
        for (int j = 1; j <= J; ++j) {
            zp *= z;
            zm /= z;
            s += coeff(j) * zp + coeff(-j) * zm;
        }
        return s;
    }

    LaurentSeries scaled(cplx factor) const {
        LaurentSeries out(J);
        for (int j = -J; j <= J; ++j) out.coeff(j) = factor * coeff(j);
        return out;
    }
};

// ---- elementary operators of the sequence representation ----

LatticeWindow apply_shift_u(const LatticeWindow& xi);      // (u xi)_n = xi_{n-1}
LatticeWindow apply_shift_u_star(const LatticeWindow& xi); // (u* xi)_n = xi_{n+1}
LatticeWindow apply_diag_v(const PhaseReducer& alpha, const LatticeWindow& xi, long long power = 1);
LatticeWindow apply_w(const PhaseReducer& alpha, const LatticeWindow& xi, int sign = +1);
LatticeWindow apply_D(cplx x, const LatticeWindow& xi);

// (h xi)_n = gamma xi_{n-1} + gamma^{-1} xi_{n+1}
//          + beta (s e^{-2 pi i alpha n} + s^{-1} e^{2 pi i alpha n}) xi_n,  s = x delta
LatticeWindow apply_h(const PhaseReducer& alpha, cplx gamma, cplx delta, cplx x, double beta,
                      const LatticeWindow& xi);

// coefficient of u^{+-n}: (-1)^n n^{-1} sin(pi alpha n)^{-1} beta^{-n} gamma^{+-n}, 1 <= n <= N
LaurentSeries g_series(const PhaseReducer& alpha, double beta, double gamma, int N);

// Fourier coefficients of e^{i g(.)} from M uniform circle samples
LaurentSeries exp_ig(const LaurentSeries& g, int sample_count, int out_half_width = -1);

// convolution kernel of the conjugator: coefficients of e^{-i g(gamma .)/2}
LaurentSeries conjugator_kernel(const PhaseReducer& alpha, double beta, double gamma, int N,
                                int sample_count);

// (k_gamma xi)_n = conj(lambda^{n^2}) sum_j E_j conj(lambda^{(n-j)^2}) xi_{n-j}
LatticeWindow apply_k(const PhaseReducer& alpha, const LaurentSeries& kernel,
                      const LatticeWindow& xi);
LatticeWindow apply_k(const PhaseReducer& alpha, double beta, double gamma,
                      const LatticeWindow& xi, int series_cutoff = 60, int sample_count = 1024);

struct IntertwineReport {
    double max_residual = 0.0;
    int trials = 0;
    int interior_lo = 0, interior_hi = 0;
};

// sup-norm residual of h_{gamma/delta}(delta) k_gamma xi = k_gamma h_{gamma delta}(delta) xi
// over random compactly supported windows, normalised per trial
IntertwineReport intertwine_residual(const PhaseReducer& alpha, double gamma, double delta,
                                     double beta, int trials, std::uint64_t seed,
                                     int window_half = 220, int series_cutoff = 60);

} // namespace amop::lattice
