#pragma once

#include "amop/eigenmode.hpp"
#include "amop/numlin.hpp"
#include "amop/phase.hpp"

#include <array>
#include <vector>

namespace amop::diffsys {

struct DiffsysError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// diagonal data (X_{p+1,p+1}, X_{p+1,p}, X_{pp}) advanced by the 3x3 recursion
struct TransferState {
    std::array<cplx, 3> v{};
    int p = 0;
};

struct Matrix3 {
    std::array<cplx, 9> a{};
    cplx& at(int i, int j) { return a[static_cast<size_t>(3 * i + j)]; }
    const cplx& at(int i, int j) const { return a[static_cast<size_t>(3 * i + j)]; }
    std::array<cplx, 3> apply(const std::array<cplx, 3>& x) const {
        std::array<cplx, 3> y{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) y[static_cast<size_t>(i)] += at(i, j) * x[static_cast<size_t>(j)];
        return y;
    }
    cplx det() const;
    static Matrix3 product(const Matrix3& a, const Matrix3& b);
};

struct TransferMatrices {
    Matrix3 C, D, E, F; // F = E D C
};

// the three factor matrices at step p and their product, with denominator guards
TransferMatrices transfer_matrices(const PhaseReducer& alpha, double theta, double beta, cplx chi,
                                   int p, double guard = 1e-9);

std::vector<TransferState> advance(TransferState state, const PhaseReducer& alpha, double theta,
                                   double beta, cplx chi, int steps, double guard = 1e-9);

// completes (X00, X11) to a genuine initial state via a least-norm solve of
// the difference system on a small diamond (the middle component X10 must
// come from an actual solution)
TransferState complete_initial_state(const PhaseReducer& alpha, double theta, double beta,
                                     cplx chi, cplx x00, cplx x11, int diamond_radius = 6);

struct WronskianReport {
    double max_residual = 0.0;     // scaled by the cancelling product magnitudes
    double max_residual_abs = 0.0; // raw absolute deviation
    double diamond_residual = 0.0; // least-norm completion quality
    int steps = 0;
};

WronskianReport wronskian_residual(const PhaseReducer& alpha, double theta, double beta, cplx chi,
                                   cplx x00, cplx x11, cplx y00, cplx y11, int P);

// full difference-system solve on the diamond |p| + |q| <= radius with two
// pinned values; exposed for the oracle tests
struct DiamondSolution {
    int radius = 0;
    std::vector<cplx> values; // indexed by (p + radius) * (2 radius + 1) + (q + radius)
    double residual = 0.0;
    cplx at(int p, int q) const {
        int R = radius;
        return values[static_cast<size_t>((p + R) * (2 * R + 1) + (q + R))];
    }
};

DiamondSolution solve_diamond(const PhaseReducer& alpha, double theta, double beta, cplx chi,
                              int radius, cplx x00, cplx x11);

// ---- resolvent expansion ----

struct ResolventTable {
    int p_max = 0, q_max = 0;
    cplx z;
    std::vector<cplx> values; // (p + p_max) * (2 q_max + 1) + (q + q_max)
    double symmetry_defect = 0.0; // max |c_pq - c_{-p,q}| before symmetrisation
    cplx at(int p, int q) const {
        return values[static_cast<size_t>((p + p_max) * (2 * q_max + 1) + (q + q_max))];
    }
    cplx& at_mut(int p, int q) {
        return values[static_cast<size_t>((p + p_max) * (2 * q_max + 1) + (q + q_max))];
    }
};

// Fourier coefficients of the resolvent of h(1) in the algebra, recovered from
// phase-sampled window solves; stores p-symmetrised values
ResolventTable resolvent_coefficients(const PhaseReducer& alpha, cplx z, double beta, int p_max,
                                      int q_max, int N, int phase_samples);

// polynomial family from the seeded difference system at theta = 0:
// zero for q >= -|p|, (-1)^p beta^{-p-1} on the first subdiagonal
ResolventTable d_polynomials(const PhaseReducer& alpha, double beta, int p_max, int q_min, cplx z);

struct IdentityFitReport {
    cplx scale;            // fitted normalisation
    double rel_residual = 0.0;
    int terms = 0;
    double lhs_norm = 0.0;
};

// couples a decaying mode to the resolvent expansion: over the (p,q) range,
// lambda^{pq} sum_n conj(lambda)^{2qn} xi_n xi_{n+p} * scale = (c_pq - d_pq) s^q
IdentityFitReport mode_resolvent_identity(const PhaseReducer& alpha,
                                          const eigenmode::EigenMode& mode,
                                          const ResolventTable& c_table,
                                          const ResolventTable& d_table, int p_max, int q_max);

} // namespace amop::diffsys
