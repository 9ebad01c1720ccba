#pragma once

#include "amop/numlin.hpp"
#include "amop/phase.hpp"

#include <optional>
#include <string>
#include <vector>

namespace amop::spectral {

struct SpectralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Discrete node/weight approximation of the density-of-states measure.
struct SpectralMeasure {
    std::vector<double> nodes;   // ascending
    std::vector<double> weights; // nonnegative, sum 1

    double total_mass() const {
        double s = 0.0;
        for (double w : weights) s += w;
        return s;
    }
    double moment(int k) const {
        double s = 0.0;
        for (size_t i = 0; i < nodes.size(); ++i) s += weights[i] * std::pow(nodes[i], k);
        return s;
    }
    double min_node() const { return nodes.front(); }
    double max_node() const { return nodes.back(); }
};

struct LevelCurve {
    double level = 0.0;
    std::vector<std::vector<cplx>> polylines;
    size_t vertex_count() const {
        size_t s = 0;
        for (const auto& p : polylines) s += p.size();
        return s;
    }
};

struct PathAnchor {
    double anchor = 0.0;     // real, > max node
    std::vector<cplx> path;  // polyline from anchor to the endpoint
};

enum class Boundary { open, periodic };

// tridiagonal truncation of gamma u + gamma^{-1} u* + beta(s v + s^{-1} v*),
// s = x delta, on the index window [-N, N]
ComplexMatrix truncation_matrix(const PhaseReducer& alpha, cplx gamma, cplx delta, cplx x,
                                double beta, int N, Boundary boundary = Boundary::open);

struct CloudPoint {
    cplx z;
    double edge_mass = 0.0; // eigenvector mass within 5 sites of either window edge
    int phase_index = 0;
};

// union over phases of truncation eigenvalues; edge_mass supports spurious
// boundary-mode filtering downstream
std::vector<CloudPoint> spectrum_cloud(const PhaseReducer& alpha, cplx gamma, cplx delta,
                                       double beta, int N, const std::vector<cplx>& phases,
                                       bool want_edge_mass = true);

std::vector<cplx> filter_cloud(const std::vector<CloudPoint>& cloud, double max_edge_mass = 0.25);

// density of states of h(1) from the periodic approximant p/q with phase
// averaging on open windows of half-width N, binned
SpectralMeasure dos_measure(long long p, long long q, double beta, int phase_samples, int N,
                            int bins);

double log_potential(const SpectralMeasure& mu, cplx z); // -inf sentinel at a node

struct Box {
    double x0, x1, y0, y1;
};

LevelCurve level_curve(const SpectralMeasure& mu, double level, const Box& bbox, int grid,
                       double tol);

// gap intervals of the binned measure: zero-weight runs longer than min_run bins
std::vector<std::pair<double, double>> detect_gaps(const SpectralMeasure& mu, int min_run = 3);

struct CriticalPoint {
    double location;
    bool converged;
    std::pair<double, double> gap;
};

std::vector<CriticalPoint> critical_points(const SpectralMeasure& mu,
                                           const std::vector<std::pair<double, double>>& gaps,
                                           double tol = 1e-12);

// analytic continuation of G = beta^{-1} exp( sum w_k Log(z - t_k) ) along the
// polyline; real positive at the real anchor
cplx G_value(const SpectralMeasure& mu, double beta, const PathAnchor& path, double guard = 1e-3);

std::vector<cplx> straight_path(cplx from, cplx to, int steps);
std::vector<cplx> loop_path(cplx center, double radius, int steps, bool closed = true);

struct ConstancyReport {
    double max_pairwise_distance = 0.0;
    std::vector<double> gammas;
    std::vector<size_t> cloud_sizes;
};

// pairwise directed Hausdorff distances between collar-filtered clouds
ConstancyReport spectrum_constancy_check(const PhaseReducer& alpha, double beta, double delta,
                                         const std::vector<double>& gammas, int N,
                                         const std::vector<cplx>& phases);

double directed_hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b);

} // namespace amop::spectral
