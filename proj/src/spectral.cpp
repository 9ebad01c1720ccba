#include "amop/spectral.hpp"

#include "amop/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace amop::spectral {

ComplexMatrix truncation_matrix(const PhaseReducer& alpha, cplx gamma, cplx delta, cplx x,
                                double beta, int N, Boundary boundary) {
    if (N < 3) throw SpectralError("truncation_matrix: N must be >= 3");
    if (gamma == cplx(0.0) || delta == cplx(0.0))
        throw SpectralError("truncation_matrix: gamma, delta nonzero");
    const int L = 2 * N + 1;
    ComplexMatrix M(L, L);
    cplx s = x * delta, si = 1.0 / (x * delta), gi = 1.0 / gamma;
    for (int i = 0; i < L; ++i) {
        long long n = i - N;
        cplx ph = alpha.v_phase(n);
        M.at(i, i) = beta * (s * ph + si * std::conj(ph));
        if (i > 0) M.at(i, i - 1) = gamma;
        if (i + 1 < L) M.at(i, i + 1) = gi;
    }
    if (boundary == Boundary::periodic) {
        M.at(0, L - 1) = gamma;
        M.at(L - 1, 0) = gi;
    } else {
        M.set_band_hint(1, 1);
    }
    return M;
}

std::vector<CloudPoint> spectrum_cloud(const PhaseReducer& alpha, cplx gamma, cplx delta,
                                       double beta, int N, const std::vector<cplx>& phases,
                                       bool want_edge_mass) {
    if (phases.empty()) throw SpectralError("spectrum_cloud: phases must be nonempty");
    std::vector<std::vector<CloudPoint>> per_phase(phases.size());
    parallel_for(static_cast<int>(phases.size()), [&](int pi) {
        auto M = truncation_matrix(alpha, gamma, delta, phases[pi], beta, N, Boundary::open);
        auto eig = numlin::hessenberg_eigenvalues(M);
        std::sort(eig.begin(), eig.end(), [](cplx a, cplx b) {
            return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
        });
        auto& out = per_phase[pi];
        out.reserve(eig.size());
        const int L = 2 * N + 1;
        const int collar = 5;
        for (const auto& z : eig) {
            CloudPoint cp;
            cp.z = z;
            cp.phase_index = pi;
            if (want_edge_mass) {
                try {
                    auto ep = numlin::inverse_iteration(M, z, 1e-10, 25);
                    double edge = 0.0;
                    for (int i = 0; i < collar; ++i)
                        edge += std::norm(ep.vector[i]) + std::norm(ep.vector[L - 1 - i]);
                    cp.edge_mass = edge;
                } catch (const numlin::NumlinError&) {
                    cp.edge_mass = 1.0; // unresolvable vector: treat as boundary artifact
                }
            }
            out.push_back(cp);
        }
    });
    std::vector<CloudPoint> cloud;
    for (const auto& v : per_phase) cloud.insert(cloud.end(), v.begin(), v.end());
    return cloud;
}

std::vector<cplx> filter_cloud(const std::vector<CloudPoint>& cloud, double max_edge_mass) {
    std::vector<cplx> out;
    out.reserve(cloud.size());
    for (const auto& cp : cloud)
        if (cp.edge_mass <= max_edge_mass) out.push_back(cp.z);
    return out;
}

SpectralMeasure dos_measure(long long p, long long q, double beta, int phase_samples, int N,
                            int bins) {
    if (phase_samples < 1) throw SpectralError("dos_measure: empty sample set");
    if (q < 1) throw SpectralError("dos_measure: q must be positive");
    const int L = 2 * N + 1;
    std::vector<std::vector<double>> all(static_cast<size_t>(phase_samples));
    parallel_for(phase_samples, [&](int m) {
        double phi = 2.0 * kPi * m / phase_samples;
        std::vector<double> diag(L), off(L - 1, 1.0);
        for (int i = 0; i < L; ++i) {
            long long n = i - N;
            long long r = ((p % q) * (n % q)) % q; // exact rational phase
            if (r < 0) r += q;
            diag[i] = 2.0 * beta * std::cos(2.0 * kPi * r / q + phi);
        }
        all[static_cast<size_t>(m)] = numlin::symtridiag_eigenvalues(diag, off);
    });

    double lo = 1e300, hi = -1e300;
    for (const auto& v : all)
        for (double t : v) {
            lo = std::min(lo, t);
            hi = std::max(hi, t);
        }
    double width = (hi - lo) / bins;
    std::vector<double> count(static_cast<size_t>(bins), 0.0);
    double total = 0.0;
    for (const auto& v : all)
        for (double t : v) {
            int b = std::min(bins - 1, static_cast<int>((t - lo) / width));
            count[static_cast<size_t>(b)] += 1.0;
            total += 1.0;
        }
    SpectralMeasure mu;
    for (int b = 0; b < bins; ++b) {
        if (count[static_cast<size_t>(b)] == 0.0) continue;
        mu.nodes.push_back(lo + (b + 0.5) * width);
        mu.weights.push_back(count[static_cast<size_t>(b)] / total);
    }
    return mu;
}

double log_potential(const SpectralMeasure& mu, cplx z) {
    double s = 0.0;
    for (size_t i = 0; i < mu.nodes.size(); ++i) {
        double d = std::abs(z - mu.nodes[i]);
        if (d == 0.0) return -HUGE_VAL;
        s += mu.weights[i] * std::log(d);
    }
    return s;
}

namespace {

double potential_deriv(const SpectralMeasure& mu, double y) {
    double s = 0.0;
    for (size_t i = 0; i < mu.nodes.size(); ++i) s += mu.weights[i] / (y - mu.nodes[i]);
    return s;
}

} // namespace

LevelCurve level_curve(const SpectralMeasure& mu, double level, const Box& bbox, int grid,
                       double tol) {
    if (grid < 8) throw SpectralError("level_curve: grid too coarse");
    const int nx = grid, ny = grid;
    const double dx = (bbox.x1 - bbox.x0) / nx, dy = (bbox.y1 - bbox.y0) / ny;
    auto P = [&](int ix, int iy) {
        return cplx(bbox.x0 + ix * dx, bbox.y0 + iy * dy);
    };
    std::vector<double> f(static_cast<size_t>((nx + 1) * (ny + 1)));
    for (int iy = 0; iy <= ny; ++iy)
        for (int ix = 0; ix <= nx; ++ix) {
            double v = log_potential(mu, P(ix, iy)) - level;
            if (v == 0.0) v = 1e-300;
            f[static_cast<size_t>(iy) * (nx + 1) + ix] = v;
        }
    auto F = [&](int ix, int iy) { return f[static_cast<size_t>(iy) * (nx + 1) + ix]; };

    // refined crossing per grid edge, keyed for exact stitching
    std::map<long long, cplx> crossings;
    auto edge_key = [&](int ix, int iy, int orient) {
        return (static_cast<long long>(iy) * (nx + 2) + ix) * 2 + orient;
    };
    auto refine = [&](cplx a, cplx b, double fa, double fb) {
        for (int it = 0; it < 80; ++it) {
            cplx m = 0.5 * (a + b);
            double fm = log_potential(mu, m) - level;
            if (std::abs(fm) < tol) return m;
            if ((fa < 0) != (fm < 0)) {
                b = m;
                fb = fm;
            } else {
                a = m;
                fa = fm;
            }
        }
        return 0.5 * (a + b);
    };
    for (int iy = 0; iy <= ny; ++iy)
        for (int ix = 0; ix < nx; ++ix)
            if ((F(ix, iy) < 0) != (F(ix + 1, iy) < 0))
                crossings[edge_key(ix, iy, 0)] =
                    refine(P(ix, iy), P(ix + 1, iy), F(ix, iy), F(ix + 1, iy));
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix <= nx; ++ix)
            if ((F(ix, iy) < 0) != (F(ix, iy + 1) < 0))
                crossings[edge_key(ix, iy, 1)] =
                    refine(P(ix, iy), P(ix, iy + 1), F(ix, iy), F(ix, iy + 1));

    // per-cell segments between crossed edges
    std::multimap<long long, long long> links;
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            long long e[4] = {edge_key(ix, iy, 0), edge_key(ix + 1, iy, 1),
                              edge_key(ix, iy + 1, 0), edge_key(ix, iy, 1)};
            int hit[4], nh = 0;
            for (int k = 0; k < 4; ++k)
                if (crossings.count(e[k])) hit[nh++] = k;
            if (nh == 2) {
                links.emplace(e[hit[0]], e[hit[1]]);
                links.emplace(e[hit[1]], e[hit[0]]);
            } else if (nh == 4) {
                // saddle: split consistently
                links.emplace(e[0], e[3]);
                links.emplace(e[3], e[0]);
                links.emplace(e[2], e[1]);
                links.emplace(e[1], e[2]);
            }
        }

    LevelCurve curve;
    curve.level = level;
    std::map<long long, int> used;
    for (const auto& [key, pt] : crossings) used[key] = 0;
    for (const auto& [start, pt0] : crossings) {
        if (used[start] >= 2) continue;
        std::vector<cplx> line;
        long long cur = start, prev = -1;
        while (true) {
            line.push_back(crossings[cur]);
            used[cur] += 1;
            auto range = links.equal_range(cur);
            long long nxt = -1;
            for (auto it = range.first; it != range.second; ++it)
                if (it->second != prev && used[it->second] < 2) {
                    nxt = it->second;
                    break;
                }
            if (nxt < 0) break;
            prev = cur;
            cur = nxt;
            if (cur == start) {
                line.push_back(crossings[start]); // close the loop
                used[start] += 1;
                break;
            }
        }
        if (line.size() > 2) curve.polylines.push_back(std::move(line));
    }
    if (curve.polylines.empty()) throw SpectralError("level_curve: empty contour in bbox");
    return curve;
}

std::vector<std::pair<double, double>> detect_gaps(const SpectralMeasure& mu, int min_run) {
    // the measure stores only populated bins; a gap is a node spacing much
    // larger than the bin width
    std::vector<std::pair<double, double>> gaps;
    if (mu.nodes.size() < 2) return gaps;
    double typical = 1e300;
    for (size_t i = 1; i < mu.nodes.size(); ++i)
        typical = std::min(typical, mu.nodes[i] - mu.nodes[i - 1]);
    for (size_t i = 1; i < mu.nodes.size(); ++i) {
        double run = mu.nodes[i] - mu.nodes[i - 1];
        if (run > (min_run + 0.5) * typical) gaps.emplace_back(mu.nodes[i - 1], mu.nodes[i]);
    }
    return gaps;
}

std::vector<CriticalPoint> critical_points(const SpectralMeasure& mu,
                                           const std::vector<std::pair<double, double>>& gaps,
                                           double tol) {
    std::vector<CriticalPoint> out;
    for (const auto& gap : gaps) {
        // the derivative is strictly decreasing between consecutive nodes and
        // runs from +inf to -inf across a gap, so a hair inside is enough
        double margin = 1e-6 * (gap.second - gap.first);
        double a = gap.first + margin, b = gap.second - margin;
        double fa = potential_deriv(mu, a), fb = potential_deriv(mu, b);
        CriticalPoint cp;
        cp.gap = gap;
        if ((fa < 0) == (fb < 0)) {
            cp.location = 0.5 * (a + b);
            cp.converged = false;
            out.push_back(cp);
            continue;
        }
        double y = 0.5 * (a + b);
        bool ok = false;
        for (int it = 0; it < 200; ++it) {
            double fy = potential_deriv(mu, y);
            if ((fa < 0) != (fy < 0))
                b = y;
            else {
                a = y;
                fa = fy;
            }
            double dfy = 0.0;
            for (size_t i = 0; i < mu.nodes.size(); ++i)
                dfy -= mu.weights[i] / ((y - mu.nodes[i]) * (y - mu.nodes[i]));
            double ynew = (dfy != 0.0) ? y - fy / dfy : 0.5 * (a + b);
            if (!(ynew > a && ynew < b)) ynew = 0.5 * (a + b);
            if (std::abs(ynew - y) < tol) {
                y = ynew;
                ok = true;
                break;
            }
            y = ynew;
        }
        cp.location = y;
        cp.converged = ok;
        out.push_back(cp);
    }
    return out;
}

cplx G_value(const SpectralMeasure& mu, double beta, const PathAnchor& path, double guard) {
    if (path.anchor <= mu.max_node())
        throw SpectralError("G_value: anchor must exceed the largest node");
    cplx L(0.0);
    for (size_t i = 0; i < mu.nodes.size(); ++i)
        L += mu.weights[i] * std::log(path.anchor - mu.nodes[i]); // real branch
    cplx prev(path.anchor, 0.0);
    for (const auto& z : path.path) {
        // straight steps that avoid the nodes keep every log ratio off the cut
        for (size_t i = 0; i < mu.nodes.size(); ++i) {
            cplx a = prev - mu.nodes[i], b = z - mu.nodes[i];
            double dist = std::min(std::abs(a), std::abs(b));
            if (dist < guard)
                throw SpectralError("G_value: path within guard distance of a node");
            L += mu.weights[i] * std::log(b / a);
        }
        prev = z;
    }
    return std::exp(L) / beta;
}

std::vector<cplx> straight_path(cplx from, cplx to, int steps) {
    std::vector<cplx> p;
    p.reserve(static_cast<size_t>(steps));
    for (int k = 1; k <= steps; ++k)
        p.push_back(from + (to - from) * (static_cast<double>(k) / steps));
    return p;
}

std::vector<cplx> loop_path(cplx center, double radius, int steps, bool closed) {
    std::vector<cplx> p;
    int total = closed ? steps + 1 : steps;
    for (int k = 1; k <= total; ++k) {
        double t = 2.0 * kPi * (k % steps) / steps;
        p.push_back(center + radius * cplx(std::cos(t), std::sin(t)));
    }
    return p;
}

double directed_hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double worst = 0.0;
    for (const auto& x : a) {
        double best = 1e300;
        for (const auto& y : b) best = std::min(best, std::abs(x - y));
        worst = std::max(worst, best);
    }
    return worst;
}

ConstancyReport spectrum_constancy_check(const PhaseReducer& alpha, double beta, double delta,
                                         const std::vector<double>& gammas, int N,
                                         const std::vector<cplx>& phases) {
    ConstancyReport rep;
    rep.gammas = gammas;
    std::vector<std::vector<cplx>> clouds;
    for (double g : gammas) {
        auto c = filter_cloud(spectrum_cloud(alpha, g, delta, beta, N, phases));
        rep.cloud_sizes.push_back(c.size());
        clouds.push_back(std::move(c));
    }
    for (size_t i = 0; i < clouds.size(); ++i)
        for (size_t j = 0; j < clouds.size(); ++j) {
            if (i == j) continue;
            rep.max_pairwise_distance =
                std::max(rep.max_pairwise_distance, directed_hausdorff(clouds[i], clouds[j]));
        }
    return rep;
}

} // namespace amop::spectral
