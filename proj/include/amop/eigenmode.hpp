#pragma once

#include "amop/lattice.hpp"
#include "amop/spectral.hpp"

#include <optional>
#include <vector>

namespace amop::eigenmode {

struct EigenmodeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EigenMode {
    cplx x;                   // unit phase of the potential
    double delta = 0.0;       // real radius, s = x * delta
    double beta = 0.0;
    cplx chi;                 // eigenvalue
    lattice::LatticeWindow xi; // unit l2-norm, largest central component real positive
    double residual = 0.0;     // interior eigen-residual
    double decay_rate = 0.0;   // max of the per-side fitted rates
    double decay_left = 0.0, decay_right = 0.0;
    double fit_rms = 0.0;      // rms deviation of the log-linear decay fit
    cplx s() const { return x * delta; }
};

struct PhaseSearchDiag {
    std::vector<cplx> coarse_phases;
    std::vector<double> coarse_objective;
    std::vector<int> minima; // indices of coarse local minima
    double refined_objective = 0.0;
    double coarse_best_objective = 0.0;
};

// sweeps the potential phase over the unit circle, locks onto the truncation
// eigenvalue nearest chi_target, refines the phase by golden-section search
// and returns the recentred, phase-aligned eigenpair
EigenMode find_phase_eigenpair(const PhaseReducer& alpha, double beta, double delta,
                               cplx chi_target, int N = 170, int coarse_grid = 64,
                               double refine_tol = 1e-4, PhaseSearchDiag* diag = nullptr);

struct DecayFit {
    double rate_left = 0.0, rate_right = 0.0, rate = 0.0;
    double rms = 0.0;
    int window_lo = 0, window_hi = 0;
    bool shrunk = false;
};

DecayFit decay_exponent(const lattice::LatticeWindow& xi, int exclude_center = 10,
                        int exclude_edge = -1);

struct GammaFit {
    cplx gamma;
    double rel_residual = 0.0;
    int interior_lo = 0, interior_hi = 0;
};

// least squares scalar in  k D_s xi = Gamma D_{1/s} xi
GammaFit gamma_value(const PhaseReducer& alpha, const lattice::LaurentSeries& kernel,
                     const lattice::LatticeWindow& xi, cplx s);

struct OmegaShiftReport {
    cplx gamma0, gamma1;
    double func_eq_residual = 0.0; // against Gamma' = G(omega) G Gamma
    double modulus_residual = 0.0; // against |Gamma'|/|Gamma| = |G|^2
    double double_shift_residual = 0.0;
};

OmegaShiftReport omega_shift_check(const PhaseReducer& alpha, const lattice::LaurentSeries& kernel,
                                   const EigenMode& mode);

enum class SymmetryKind { sigma, iota };

struct SymmetryReport {
    double residual = 0.0;          // eigen-residual of the transformed mode
    double original_residual = 0.0; // same functional on the input mode
    bool involution_exact = false;  // applying the map twice returns the window
};

SymmetryReport symmetry_check(const PhaseReducer& alpha, const EigenMode& mode, SymmetryKind kind);

struct ScanPoint {
    double y;            // real scan target
    double delta;        // level radius e^{Phi(y)} / beta
    cplx sum_squares;    // phase-aligned sum of xi_n^2
    cplx chi;
    double overlap_prev = 1.0; // |<xi_i, xi_{i-1}>|
};

struct SumSquaresScan {
    std::vector<ScanPoint> points;
    double min_abs = 0.0;
    double min_location = 0.0;
};

// scans real targets across a spectral gap on their level curves, tracking the
// aligned sum of squared components; the minimum locates the critical point
SumSquaresScan sum_squares_scan(const PhaseReducer& alpha, const spectral::SpectralMeasure& mu,
                                double beta, const std::vector<double>& targets, int N = 150);

} // namespace amop::eigenmode
