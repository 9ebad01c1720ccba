#pragma once

#include "amop/eigenmode.hpp"

#include <vector>

namespace amop::fredholm {

struct FredholmError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TanSeries {
    lattice::LaurentSeries series;
    double pole_margin = 0.0; // min distance of g values to the tan poles
    double max_abs = 0.0;     // max |tan| on the sampled circle
};

// Fourier coefficients of tan(g(gamma .)) by circle sampling; rejects gamma
// when the sampled values come too close to a pole
TanSeries tan_g_coefficients(const PhaseReducer& alpha, double beta, double gamma, int N,
                             int samples = 1024, double margin_req = 0.05);

// convolution band of the kernel operator: coefficients of tan(-g(gamma .)/4)
lattice::LaurentSeries kernel_band(const PhaseReducer& alpha, double beta, double gamma, int N,
                                   int samples = 1024);

struct Assembly {
    ComplexMatrix H;
    int n_min = 0, n_max = 0;
    int core_lo = 0, core_hi = 0; // outside, the diagonal sits at the exact +-i limits
    cplx Gamma, G;
};

// banded matrix: convolution band plus diagonal i(1 - Gamma_n)/(1 + Gamma_n),
// Gamma_n = Gamma G^{2n} lambda^{2n^2}; saturated tails take the exact limits
Assembly assemble_H(const PhaseReducer& alpha, cplx Gamma, cplx G,
                    const lattice::LaurentSeries& band, int half_width, double guard = 1e-6);

// the two closed curves band(T) + i and band(T) - i
std::pair<std::vector<cplx>, std::vector<cplx>> essential_spectrum_curve(
    const lattice::LaurentSeries& band, int samples);

struct KernelDimReport {
    int dim = 0;
    bool clean_gap = true;
    double gap_ratio = 0.0;
    std::vector<double> smallest; // trailing singular values, ascending
};

KernelDimReport kernel_dimension(const ComplexMatrix& H, double gap_ratio_req = 1e3);

struct TransformReport {
    double residual = 0.0; // ||H eta|| / ||eta|| on the valid interior
    int interior_lo = 0, interior_hi = 0;
    double min_denominator = 0.0; // min |1 + Gamma_n| over the window
};

enum class BranchPolicy { continuous, single_flip, global_flip };

// Prop-3.2-style transform: eta_n = (t_n + 1/t_n) xi_{-n} with t_n the
// continuous square-root branch of Gamma_n, checked against the assembled
// band-plus-diagonal action
TransformReport kernel_transform_check(const PhaseReducer& alpha, const eigenmode::EigenMode& mode,
                                       cplx Gamma, const lattice::LaurentSeries& band,
                                       BranchPolicy policy = BranchPolicy::continuous,
                                       int flip_site = 7);

struct UnboundedReport {
    double residual = 0.0;
    double theta = 0.0, nu = 0.0;
    cplx c;
    double fit_residual = 0.0;      // quality of the D_x k D_x eigen-fit
    double singular_margin = 0.0;   // distance of alpha n^2 + 2 theta n + nu to half-integers
    double c_modulus_deviation = 0.0;
};

// the unit-circle analogue: D_x k D_x xi = c xi, eta_n = cos(pi(alpha n^2 + 2
// theta n + nu)) xi_{-n}, checked against the band plus tan diagonal
UnboundedReport unbounded_transform_check(const PhaseReducer& alpha, double beta, double gamma,
                                          cplx x, const lattice::LatticeWindow& xi,
                                          const lattice::LaurentSeries& band,
                                          const lattice::LaurentSeries& conj_kernel,
                                          double margin_req = 1e-4);

// matrix of the unbounded variant on [-N, N]
ComplexMatrix unbounded_H(const PhaseReducer& alpha, double theta, double nu,
                          const lattice::LaurentSeries& band, int half_width,
                          double margin_req = 1e-4);

struct UnitarityReport {
    double max_modulus_deviation = 0.0; // over non-edge modes
    double max_angle_gap = 0.0;         // radians, coverage of the unit circle
    int kept = 0, excluded = 0;
    std::vector<cplx> eigenvalues;
};

// spectrum of the central compression of D_x k_gamma D_x
UnitarityReport k_unitarity_check(const PhaseReducer& alpha, double beta, double gamma, cplx x,
                                  int half_width, const lattice::LaurentSeries& kernel);

// localised eigenpair of h(x) on the unit circle (delta = 1), recentred so the
// localisation centre sits at index 0; phase x is adjusted accordingly
struct CircleMode {
    cplx x;
    double energy = 0.0;
    lattice::LatticeWindow xi;
    double residual = 0.0;
};

CircleMode circle_mode(const PhaseReducer& alpha, double beta, cplx x_seed, int half_width,
                       int which_from_top = 0);

} // namespace amop::fredholm
