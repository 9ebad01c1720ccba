#include "doctest.h"

#include "amop/spectral.hpp"

#include <algorithm>
#include <cmath>

using namespace amop;
using namespace amop::spectral;

namespace {

const PhaseReducer kAlpha = PhaseReducer::golden();

SpectralMeasure& golden_dos() {
    static SpectralMeasure mu = dos_measure(89, 144, 2.0, 16, 432, 600);
    return mu;
}

} // namespace

TEST_CASE("truncation matrix shape and self-adjoint case") {
    auto M = truncation_matrix(kAlpha, 1.0, 1.0, 1.0, 2.0, 20);
    CHECK(M.rows == 41);
    CHECK(M.has_band());
    // exactly tridiagonal
    for (int i = 0; i < M.rows; ++i)
        for (int j = 0; j < M.cols; ++j)
            if (std::abs(i - j) > 1) CHECK(M.at(i, j) == cplx(0.0));
    // delta = x = gamma = 1: Hermitian, real eigenvalues up to the sqrt(eps)
    // limit of the nonsymmetric QR on exponentially close symmetric pairs
    auto eig = numlin::hessenberg_eigenvalues(M);
    for (auto z : eig) CHECK(std::abs(z.imag()) < 2e-7);
    // and they match the dedicated self-adjoint solver
    {
        std::vector<double> d(M.rows), e(M.rows - 1, 1.0);
        for (int i = 0; i < M.rows; ++i) d[i] = M.at(i, i).real();
        auto ref = numlin::symtridiag_eigenvalues(d, e);
        std::vector<double> mine;
        for (auto z : eig) mine.push_back(z.real());
        std::sort(mine.begin(), mine.end());
        for (int i = 0; i < M.rows; ++i) CHECK(std::abs(mine[i] - ref[i]) < 2e-7);
    }

    // beta = 0: free Laplacian closed form, any gamma
    for (cplx g : {cplx(1.0), cplx(1.3)}) {
        auto F = truncation_matrix(kAlpha, g, 1.0, 1.0, 0.0, 12);
        auto ef = numlin::hessenberg_eigenvalues(F);
        std::sort(ef.begin(), ef.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
        int L = 25;
        for (int k = 1; k <= L; ++k) {
            double expect = 2.0 * std::cos(kPi * k / (L + 1));
            CHECK(std::abs(ef[static_cast<size_t>(L - k)] - expect) < 1e-9);
        }
    }
}

TEST_CASE("periodic closure fills the corners") {
    auto M = truncation_matrix(kAlpha, 1.0, 1.0, 1.0, 2.0, 5, Boundary::periodic);
    CHECK(M.at(0, M.cols - 1) == cplx(1.0));
    CHECK(M.at(M.rows - 1, 0) == cplx(1.0));
}

TEST_CASE("density of states: mass, symmetry, moments") {
    const auto& mu = golden_dos();
    CHECK(std::abs(mu.total_mass() - 1.0) < 1e-12);
    for (double w : mu.weights) CHECK(w >= 0.0);
    CHECK(std::is_sorted(mu.nodes.begin(), mu.nodes.end()));

    double beta = 2.0;
    CHECK(std::abs(mu.moment(1)) < 1e-3);
    CHECK(std::abs(mu.moment(3)) < 2e-2);
    CHECK(std::abs(mu.moment(2) - (2 * beta * beta + 2)) < 0.005 * (2 * beta * beta + 2));

    // fourth moment against the corrected closed form
    double c2a = std::cos(2.0 * kPi * kAlpha.value());
    double m4 = 6 * std::pow(beta, 4) + (16 + 8 * c2a) * beta * beta + 6;
    CHECK(std::abs(mu.moment(4) - m4) < 0.01 * m4);
}

TEST_CASE("log potential basics") {
    const auto& mu = golden_dos();
    // unit mass: far field matches log|z|
    cplx far(900.0, 300.0);
    CHECK(std::abs(log_potential(mu, far) - std::log(std::abs(far))) < 1e-4);
    // real-node measure: symmetric under conjugation
    cplx z(1.2, 0.7);
    CHECK(log_potential(mu, z) == log_potential(mu, std::conj(z)));
    // node hit: sentinel
    CHECK(log_potential(mu, cplx(mu.nodes[3], 0.0)) == -HUGE_VAL);
}

TEST_CASE("potential is harmonic off the support") {
    const auto& mu = golden_dos();
    double h = 1e-3;
    for (cplx z : {cplx(3.1, 2.2), cplx(-1.4, 1.9), cplx(0.3, 3.5)}) {
        double lap = log_potential(mu, z + h) + log_potential(mu, z - h) +
                     log_potential(mu, z + cplx(0, h)) + log_potential(mu, z - cplx(0, h)) -
                     4.0 * log_potential(mu, z);
        CHECK(std::abs(lap) < 1e-6); // O(h^2 * 4th derivative) scale
    }
}

TEST_CASE("level curves: bisection contract, symmetry, nesting, asymptotics") {
    const auto& mu = golden_dos();
    double beta = 2.0;

    double level = std::log(beta * 1.5);
    Box box{-8.5, 8.5, -6.5, 6.5};
    auto curve = level_curve(mu, level, box, 120, 1e-9);
    CHECK(curve.vertex_count() > 100);
    for (const auto& line : curve.polylines)
        for (const auto& z : line) CHECK(std::abs(log_potential(mu, z) - level) < 1e-9);

    // symmetric measure: vertex set symmetric under conj and -z
    std::vector<cplx> all;
    for (const auto& line : curve.polylines) all.insert(all.end(), line.begin(), line.end());
    std::vector<cplx> conj_all, neg_all;
    for (auto z : all) {
        conj_all.push_back(std::conj(z));
        neg_all.push_back(-z);
    }
    CHECK(directed_hausdorff(conj_all, all) < 0.2);
    CHECK(directed_hausdorff(neg_all, all) < 0.2);

    // nesting: delta = 1.2 curve lies strictly inside the delta = 1.5 one
    auto inner = level_curve(mu, std::log(beta * 1.2), box, 120, 1e-9);
    for (const auto& line : inner.polylines)
        for (const auto& z : line) CHECK(log_potential(mu, z) < level);

    // very large level: within 2% of the circle e^L
    double big = std::log(40.0);
    Box big_box{-55.0, 55.0, -55.0, 55.0};
    auto far = level_curve(mu, big, big_box, 100, 1e-10);
    for (const auto& line : far.polylines)
        for (const auto& z : line) CHECK(std::abs(std::abs(z) - 40.0) < 0.02 * 40.0);

    CHECK_THROWS_AS(level_curve(mu, std::log(3.0), Box{40.0, 50.0, 40.0, 50.0}, 24, 1e-8),
                    SpectralError);
}

TEST_CASE("two-point measure has its critical point at the origin") {
    SpectralMeasure two;
    two.nodes = {-1.5, 1.5};
    two.weights = {0.5, 0.5};
    auto cps = critical_points(two, {{-1.5, 1.5}});
    REQUIRE(cps.size() == 1);
    CHECK(cps[0].converged);
    CHECK(std::abs(cps[0].location) < 1e-10);
}

TEST_CASE("gaps of the golden DOS each hold exactly one critical point") {
    const auto& mu = golden_dos();
    auto gaps = detect_gaps(mu);
    // keep major gaps only
    std::vector<std::pair<double, double>> major;
    for (auto g : gaps)
        if (g.second - g.first > 0.3) major.push_back(g);
    REQUIRE(major.size() >= 2);
    auto cps = critical_points(mu, major);
    for (const auto& cp : cps) {
        CHECK(cp.converged);
        CHECK(cp.location > cp.gap.first);
        CHECK(cp.location < cp.gap.second);
        // bracketing oracle: derivative changes sign across the root
        double eps = 1e-7 * (cp.gap.second - cp.gap.first);
        double dm = 0.0, dp = 0.0;
        for (size_t i = 0; i < mu.nodes.size(); ++i) {
            dm += mu.weights[i] / (cp.location - eps - mu.nodes[i]);
            dp += mu.weights[i] / (cp.location + eps - mu.nodes[i]);
        }
        CHECK(dm * dp < 0.0);
        // uniqueness within the gap: fine scan of the derivative sign changes
        int sign_changes = 0;
        double margin = 1e-6 * (cp.gap.second - cp.gap.first);
        double prev = 0.0;
        for (int k = 0; k <= 400; ++k) {
            double y = cp.gap.first + margin +
                       (cp.gap.second - cp.gap.first - 2 * margin) * k / 400.0;
            double d = 0.0;
            for (size_t i = 0; i < mu.nodes.size(); ++i) d += mu.weights[i] / (y - mu.nodes[i]);
            if (k > 0 && (d < 0) != (prev < 0)) ++sign_changes;
            prev = d;
        }
        CHECK(sign_changes == 1);
    }
}

TEST_CASE("analytic continuation of G") {
    const auto& mu = golden_dos();
    double beta = 2.0;
    double anchor = mu.max_node() + 2.0;

    // at a real point beyond the spectrum: real positive, equals e^Phi / beta
    PathAnchor trivial{anchor, {}};
    cplx g0 = G_value(mu, beta, trivial);
    CHECK(g0.imag() == 0.0);
    CHECK(g0.real() > 0.0);
    CHECK(std::abs(g0.real() - std::exp(log_potential(mu, anchor)) / beta) < 1e-12);

    // modulus is path independent
    cplx target(1.1, 2.3);
    PathAnchor direct{anchor, straight_path(cplx(anchor, 0.0), target, 180)};
    PathAnchor detour{anchor, {}};
    {
        auto leg1 = straight_path(cplx(anchor, 0.0), cplx(anchor, 4.0), 60);
        auto leg2 = straight_path(cplx(anchor, 4.0), cplx(-2.0, 5.0), 120);
        auto leg3 = straight_path(cplx(-2.0, 5.0), target, 120);
        detour.path = leg1;
        detour.path.insert(detour.path.end(), leg2.begin(), leg2.end());
        detour.path.insert(detour.path.end(), leg3.begin(), leg3.end());
    }
    cplx gd = G_value(mu, beta, direct);
    cplx gv = G_value(mu, beta, detour);
    CHECK(std::abs(std::abs(gd) - std::exp(log_potential(mu, target)) / beta) < 1e-10);
    CHECK(std::abs(std::abs(gv) - std::abs(gd)) < 1e-10);

    // out and back along the reversed path returns the anchor value
    PathAnchor there_and_back{anchor, direct.path};
    for (auto it = direct.path.rbegin() + 1; it != direct.path.rend(); ++it)
        there_and_back.path.push_back(*it);
    there_and_back.path.push_back(cplx(anchor, 0.0));
    cplx gr = G_value(mu, beta, there_and_back);
    CHECK(std::abs(gr - g0) < 1e-10);

    // loop around the whole spectrum: unit mass, factor e^{2 pi i}
    {
        double R = std::max(std::abs(mu.min_node()), std::abs(mu.max_node())) + 2.0;
        PathAnchor loop{mu.max_node() + 2.0, {}};
        loop.path = straight_path(cplx(loop.anchor, 0.0), cplx(R, 0.0), 10);
        auto circle = loop_path(cplx(0.0, 0.0), R, 720);
        loop.path.insert(loop.path.end(), circle.begin(), circle.end());
        loop.path.push_back(cplx(loop.anchor, 0.0));
        cplx gl = G_value(mu, beta, loop);
        CHECK(std::abs(gl - g0) < 1e-8); // e^{2 pi i * 1} = 1
    }

    // loop around one cluster: factor e^{2 pi i mass}, close to a lambda^{2n}
    {
        auto gaps = detect_gaps(mu);
        std::vector<std::pair<double, double>> major;
        for (auto g : gaps)
            if (g.second - g.first > 0.3) major.push_back(g);
        REQUIRE(!major.empty());
        double cut = major.back().first + 0.5 * (major.back().second - major.back().first);
        double mass = 0.0;
        for (size_t i = 0; i < mu.nodes.size(); ++i)
            if (mu.nodes[i] > cut) mass += mu.weights[i];

        double mid = 0.5 * (cut + mu.max_node() + 1.0);
        double rad = mu.max_node() + 1.0 - mid;
        PathAnchor loop{mu.max_node() + 2.0, {}};
        loop.path = straight_path(cplx(loop.anchor, 0.0), cplx(mid + rad, 0.0), 8);
        auto circle = loop_path(cplx(mid, 0.0), rad, 1440);
        loop.path.insert(loop.path.end(), circle.begin(), circle.end());
        loop.path.push_back(cplx(loop.anchor, 0.0));
        cplx gl = G_value(mu, beta, loop);
        cplx factor = gl / g0;
        CHECK(std::abs(std::abs(factor) - 1.0) < 1e-9);
        cplx expect = std::exp(cplx(0.0, 2.0 * kPi * mass));
        CHECK(std::abs(factor - expect) < 1e-6);
        // gap labelling: the factor sits near some lambda^{2n}
        double best = 1e300;
        for (int n = -40; n <= 40; ++n)
            best = std::min(best, std::abs(factor - kAlpha.lambda_pow(2 * n)));
        CHECK(best < 0.05);
    }
}

TEST_CASE("phase-union cloud sits on the level curve") {
    const auto& mu = golden_dos();
    double beta = 2.0, delta = 1.5;
    std::vector<cplx> phases;
    for (int k = 0; k < 6; ++k) {
        double t = 2.0 * kPi * k / 6;
        phases.push_back({std::cos(t), std::sin(t)});
    }
    auto cloud = filter_cloud(spectrum_cloud(kAlpha, 1.0, delta, beta, 250, phases));
    CHECK(cloud.size() > 1000);
    double level = std::log(beta * delta);
    double mean_dev = 0.0;
    for (auto z : cloud) mean_dev += std::abs(log_potential(mu, z) - level);
    mean_dev /= static_cast<double>(cloud.size());
    CHECK(mean_dev < 0.03);

    // conjugating every phase conjugates the cloud
    std::vector<cplx> conj_phases;
    for (auto x : phases) conj_phases.push_back(std::conj(x));
    auto cloud2 = filter_cloud(spectrum_cloud(kAlpha, 1.0, delta, beta, 250, conj_phases));
    std::vector<cplx> conj_cloud2;
    for (auto z : cloud2) conj_cloud2.push_back(std::conj(z));
    CHECK(directed_hausdorff(cloud, conj_cloud2) < 1e-8);
}

TEST_CASE("cloud at delta=1 is real and symmetric") {
    std::vector<cplx> phases;
    for (int k = 0; k < 8; ++k) {
        double t = 2.0 * kPi * k / 8;
        phases.push_back({std::cos(t), std::sin(t)});
    }
    auto cloud = filter_cloud(spectrum_cloud(kAlpha, 1.0, 1.0, 2.0, 150, phases));
    std::vector<cplx> neg;
    for (auto z : cloud) {
        CHECK(std::abs(z.imag()) < 2e-7);
        neg.push_back(-z);
    }
    CHECK(directed_hausdorff(neg, cloud) < 0.05);
}

TEST_CASE("spectrum constancy in the hopping weight") {
    std::vector<cplx> phases;
    for (int k = 0; k < 6; ++k) {
        double t = 2.0 * kPi * k / 6;
        phases.push_back({std::cos(t), std::sin(t)});
    }
    auto rep = spectrum_constancy_check(kAlpha, 2.0, 1.5, {0.8, 1.0, 1.25}, 180, phases);
    CHECK(rep.max_pairwise_distance < 0.05);

    auto rep2 = spectrum_constancy_check(kAlpha, 2.0, 1.5, {1.2, 1.2}, 100, phases);
    CHECK(rep2.max_pairwise_distance == 0.0);
}
