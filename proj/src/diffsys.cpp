#include "amop/diffsys.hpp"

#include "amop/parallel.hpp"

#include <cmath>

namespace amop::diffsys {

cplx Matrix3::det() const {
    return at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) -
           at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0)) +
           at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
}

Matrix3 Matrix3::product(const Matrix3& a, const Matrix3& b) {
    Matrix3 c;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            cplx s = 0.0;
            for (int k = 0; k < 3; ++k) s += a.at(i, k) * b.at(k, j);
            c.at(i, j) = s;
        }
    return c;
}

namespace {

double sin_alpha_arg(const PhaseReducer& alpha, long long mult, double shift) {
    return std::sin(kPi * alpha.reduce_mod2(mult) + shift);
}
double cos_alpha_arg(const PhaseReducer& alpha, long long mult, double shift) {
    return std::cos(kPi * alpha.reduce_mod2(mult) + shift);
}

} // namespace

TransferMatrices transfer_matrices(const PhaseReducer& alpha, double theta, double beta, cplx chi,
                                   int p, double guard) {
    double sa = std::sin(kPi * alpha.reduce_mod2(1));
    double s1 = sin_alpha_arg(alpha, p + 1, theta);             // sin[pi a (p+1) + th]
    double s2 = sin_alpha_arg(alpha, 2 * (p + 1LL), 2 * theta); // sin[2 pi a (p+1) + 2 th]
    double s21 = sin_alpha_arg(alpha, 2 * p + 1LL, 2 * theta);  // sin[pi a (2p+1) + 2 th]
    double s23 = sin_alpha_arg(alpha, 2 * p + 3LL, 2 * theta);  // sin[pi a (2p+3) + 2 th]
    double c1 = cos_alpha_arg(alpha, p + 1, theta);             // cos[pi a (p+1) + th]

    if (std::fabs(sa) < guard) throw DiffsysError("transfer_matrices: sin(pi alpha) under guard");
    if (std::fabs(c1) < guard)
        throw DiffsysError("transfer_matrices: cos[pi alpha (p+1) + theta] under guard at p = " +
                           std::to_string(p));
    if (std::fabs(s23) < guard)
        throw DiffsysError("transfer_matrices: sin[pi alpha (2p+3) + 2 theta] under guard at p = " +
                           std::to_string(p));

    TransferMatrices tm;
    tm.C.at(0, 0) = -beta * s2 / sa;
    tm.C.at(0, 1) = chi * s1 / sa;
    tm.C.at(0, 2) = -s21 / sa;
    tm.C.at(1, 0) = 1.0;
    tm.C.at(2, 1) = 1.0;

    tm.D.at(0, 1) = chi / (2.0 * c1);
    tm.D.at(0, 2) = -beta;
    tm.D.at(1, 1) = 1.0;
    tm.D.at(2, 0) = 1.0;

    // sign of the first entry corrected against the difference system itself
    tm.E.at(0, 0) = chi * s1 / (beta * s23);
    tm.E.at(0, 1) = -s2 / (beta * s23);
    tm.E.at(0, 2) = sa / s23;
    tm.E.at(1, 0) = 1.0;
    tm.E.at(2, 1) = 1.0;

    tm.F = Matrix3::product(tm.E, Matrix3::product(tm.D, tm.C));
    return tm;
}

std::vector<TransferState> advance(TransferState state, const PhaseReducer& alpha, double theta,
                                   double beta, cplx chi, int steps, double guard) {
    std::vector<TransferState> orbit;
    orbit.reserve(static_cast<size_t>(steps) + 1);
    orbit.push_back(state);
    for (int k = 0; k < steps; ++k) {
        auto tm = transfer_matrices(alpha, theta, beta, chi, state.p, guard);
        state.v = tm.F.apply(state.v);
        state.p += 1;
        orbit.push_back(state);
    }
    return orbit;
}

DiamondSolution solve_diamond(const PhaseReducer& alpha, double theta, double beta, cplx chi,
                              int radius, cplx x00, cplx x11) {
    const int R = radius;
    const int W = 2 * R + 1;
    auto idx = [&](int p, int q) { return (p + R) * W + (q + R); };
    std::vector<int> col_of(static_cast<size_t>(W) * W, -1);
    std::vector<std::pair<int, int>> pq_of;
    for (int p = -R; p <= R; ++p)
        for (int q = -R; q <= R; ++q)
            if (std::abs(p) + std::abs(q) <= R) {
                col_of[static_cast<size_t>(idx(p, q))] = static_cast<int>(pq_of.size());
                pq_of.emplace_back(p, q);
            }
    int ncols = static_cast<int>(pq_of.size());

    struct Row {
        std::array<std::pair<int, cplx>, 5> e{};
        int len = 0;
    };
    std::vector<Row> rows;
    std::vector<cplx> rhs;
    auto push_row = [&](std::initializer_list<std::pair<int, cplx>> entries, cplx b) {
        Row row;
        for (const auto& ent : entries)
            if (ent.first >= 0) row.e[static_cast<size_t>(row.len++)] = ent;
        rows.push_back(row);
        rhs.push_back(b);
    };

    for (int p = -R; p <= R; ++p)
        for (int q = -R; q <= R; ++q) {
            if (std::abs(p) + std::abs(q) > R - 1) continue;
            double cq = cos_alpha_arg(alpha, q, theta), sq = sin_alpha_arg(alpha, q, theta);
            double cp = cos_alpha_arg(alpha, p, theta), sp = sin_alpha_arg(alpha, p, theta);
            int c_m = col_of[static_cast<size_t>(idx(p - 1, q))];
            int c_p = col_of[static_cast<size_t>(idx(p + 1, q))];
            int c_qm = col_of[static_cast<size_t>(idx(p, q - 1))];
            int c_qp = col_of[static_cast<size_t>(idx(p, q + 1))];
            int c_0 = col_of[static_cast<size_t>(idx(p, q))];
            push_row({{c_m, cplx(cq)}, {c_p, cplx(cq)}, {c_qm, cplx(beta * cp)},
                      {c_qp, cplx(beta * cp)}, {c_0, -chi}},
                     0.0);
            push_row({{c_m, cplx(sq)}, {c_p, cplx(-sq)}, {c_qm, cplx(-beta * sp)},
                      {c_qp, cplx(beta * sp)}},
                     0.0);
        }
    push_row({{col_of[static_cast<size_t>(idx(0, 0))], cplx(1.0)}}, x00);
    push_row({{col_of[static_cast<size_t>(idx(1, 1))], cplx(1.0)}}, x11);

    int nrows = static_cast<int>(rows.size());
    ComplexMatrix A(nrows, ncols);
    for (int r = 0; r < nrows; ++r)
        for (int m = 0; m < rows[static_cast<size_t>(r)].len; ++m) {
            auto [c, v] = rows[static_cast<size_t>(r)].e[static_cast<size_t>(m)];
            A.at(r, c) += v;
        }
    auto x = numlin::lstsq_minnorm(A, rhs);

    DiamondSolution sol;
    sol.radius = R;
    sol.values.assign(static_cast<size_t>(W) * W, cplx(0.0));
    for (int c = 0; c < ncols; ++c) {
        auto [p, q] = pq_of[static_cast<size_t>(c)];
        sol.values[static_cast<size_t>(idx(p, q))] = x[static_cast<size_t>(c)];
    }
    auto ax = A.matvec(x);
    double r2 = 0.0;
    for (int r = 0; r < nrows; ++r)
        r2 += std::norm(ax[static_cast<size_t>(r)] - rhs[static_cast<size_t>(r)]);
    sol.residual = std::sqrt(r2);
    return sol;
}

TransferState complete_initial_state(const PhaseReducer& alpha, double theta, double beta,
                                     cplx chi, cplx x00, cplx x11, int diamond_radius) {
    auto sol = solve_diamond(alpha, theta, beta, chi, diamond_radius, x00, x11);
    TransferState st;
    st.p = 0;
    st.v = {sol.at(1, 1), sol.at(1, 0), sol.at(0, 0)};
    return st;
}

WronskianReport wronskian_residual(const PhaseReducer& alpha, double theta, double beta, cplx chi,
                                   cplx x00, cplx x11, cplx y00, cplx y11, int P) {
    auto solx = solve_diamond(alpha, theta, beta, chi, 6, x00, x11);
    auto soly = solve_diamond(alpha, theta, beta, chi, 6, y00, y11);
    TransferState sx{{solx.at(1, 1), solx.at(1, 0), solx.at(0, 0)}, 0};
    TransferState sy{{soly.at(1, 1), soly.at(1, 0), soly.at(0, 0)}, 0};
    auto ox = advance(sx, alpha, theta, beta, chi, P + 1);
    auto oy = advance(sy, alpha, theta, beta, chi, P + 1);

    WronskianReport rep;
    rep.diamond_residual = std::max(solx.residual, soly.residual);
    rep.steps = P;
    cplx w0 = x00 * y11 - x11 * y00;
    // conserved combination: sin[pi a (2p+3) + 2 th] * w_p = sin(pi a + 2 th) * w0
    double num = std::sin(kPi * alpha.reduce_mod2(1) + 2.0 * theta);
    for (int p = 0; p <= P; ++p) {
        cplx t1 = ox[static_cast<size_t>(p)].v[0] * oy[static_cast<size_t>(p + 1)].v[0];
        cplx t2 = ox[static_cast<size_t>(p + 1)].v[0] * oy[static_cast<size_t>(p)].v[0];
        double s23 = sin_alpha_arg(alpha, 2 * p + 3LL, 2 * theta);
        cplx rhs = num / s23 * w0;
        double diff = std::abs((t1 - t2) - rhs);
        rep.max_residual_abs = std::max(rep.max_residual_abs, diff);
        // orbits grow geometrically, so the meaningful accuracy reference is
        // the magnitude of the cancelling products
        rep.max_residual =
            std::max(rep.max_residual, diff / std::max(1.0, std::abs(t1) + std::abs(t2)));
    }
    return rep;
}

ResolventTable resolvent_coefficients(const PhaseReducer& alpha, cplx z, double beta, int p_max,
                                      int q_max, int N, int phase_samples) {
    const int M = phase_samples;
    if (M < 4 * q_max + 4)
        throw DiffsysError("resolvent_coefficients: phase sample count too small");
    std::vector<std::vector<cplx>> cols(static_cast<size_t>(M));
    std::vector<double> peaks(static_cast<size_t>(M), 0.0);
    parallel_for(M, [&](int m) {
        double t = 2.0 * kPi * m / M;
        cplx x(std::cos(t), std::sin(t));
        auto H = spectral::truncation_matrix(alpha, 1.0, 1.0, x, beta, N);
        for (int i = 0; i < H.rows; ++i) H.at(i, i) -= z;
        std::vector<cplx> rhsv(static_cast<size_t>(H.rows), cplx(0.0));
        rhsv[static_cast<size_t>(N)] = 1.0;
        cols[static_cast<size_t>(m)] = numlin::banded_solve(H, rhsv);
        double big = 0.0;
        for (const auto& v : cols[static_cast<size_t>(m)]) big = std::max(big, std::abs(v));
        peaks[static_cast<size_t>(m)] = big;
    });
    for (double big : peaks)
        if (big > 1e8)
            throw DiffsysError(
                "resolvent_coefficients: z too close to the spectrum (ill-conditioned solve)");

    ResolventTable table;
    table.p_max = p_max;
    table.q_max = q_max;
    table.z = z;
    table.values.assign(static_cast<size_t>(2 * p_max + 1) * (2 * q_max + 1), cplx(0.0));
    ResolventTable raw = table;
    for (int p = -p_max; p <= p_max; ++p)
        for (int q = -q_max; q <= q_max; ++q) {
            cplx s = 0.0;
            for (int m = 0; m < M; ++m) {
                double t = 2.0 * kPi * m * static_cast<double>(q) / M;
                s += cols[static_cast<size_t>(m)][static_cast<size_t>(p + N)] *
                     cplx(std::cos(t), -std::sin(t));
            }
            raw.at_mut(p, q) =
                alpha.lambda_pow(static_cast<long long>(p) * q) * s / static_cast<double>(M);
        }
    for (int p = -p_max; p <= p_max; ++p)
        for (int q = -q_max; q <= q_max; ++q) {
            table.at_mut(p, q) = 0.5 * (raw.at(p, q) + raw.at(-p, q));
            table.symmetry_defect =
                std::max(table.symmetry_defect, std::abs(raw.at(p, q) - raw.at(-p, q)));
        }
    return table;
}

ResolventTable d_polynomials(const PhaseReducer& alpha, double beta, int p_max, int q_min, cplx z) {
    if (q_min > -1) throw DiffsysError("d_polynomials: q_min must be <= -1");
    const int depth = -q_min;
    const int P = p_max + depth + 2; // widened internal range
    const double guard = 1e-9;

    std::vector<std::vector<cplx>> d(static_cast<size_t>(P + 2),
                                     std::vector<cplx>(static_cast<size_t>(depth + 2), cplx(0.0)));
    auto D = [&](int p, int q) -> cplx {
        p = std::abs(p);
        if (q >= -p) return 0.0;
        if (p > P + 1 || -q > depth + 1) throw DiffsysError("d_polynomials: range overflow");
        return d[static_cast<size_t>(p)][static_cast<size_t>(-q - 1)];
    };
    // seeded subdiagonal
    for (int p = 0; p <= P + 1 && p + 1 <= depth + 1; ++p)
        d[static_cast<size_t>(p)][static_cast<size_t>(p)] =
            ((p & 1) ? -1.0 : 1.0) * std::pow(beta, -(p + 1));

    // march down in q from both difference equations at (p, q+1)
    for (int qt = -2; qt >= q_min; --qt) {
        int q = qt + 1;
        for (int p = 0; p <= P + qt; ++p) {
            if (qt >= -p - 1) continue; // zero or seed
            double cq = cos_alpha_arg(alpha, q, 0.0), sq = sin_alpha_arg(alpha, q, 0.0);
            double cp = cos_alpha_arg(alpha, p, 0.0), sp = sin_alpha_arg(alpha, p, 0.0);
            cplx val;
            if (p == 0) {
                if (std::fabs(cp) < guard) throw DiffsysError("d_polynomials: cos guard at p = 0");
                val = (z * D(0, q) - 2.0 * cq * D(1, q)) / (beta * cp) - D(0, q + 1);
            } else {
                if (std::fabs(cp) < guard || std::fabs(sp) < guard)
                    throw DiffsysError("d_polynomials: denominator guard at p = " + std::to_string(p));
                cplx r1 = (z * D(p, q) - cq * (D(p - 1, q) + D(p + 1, q))) / (beta * cp) - D(p, q + 1);
                cplx r2 = D(p, q + 1) + sq * (D(p - 1, q) - D(p + 1, q)) / (beta * sp);
                val = 0.5 * (r1 + r2);
            }
            d[static_cast<size_t>(p)][static_cast<size_t>(-qt - 1)] = val;
        }
    }

    ResolventTable table;
    table.p_max = p_max;
    table.q_max = depth;
    table.z = z;
    table.values.assign(static_cast<size_t>(2 * p_max + 1) * (2 * depth + 1), cplx(0.0));
    for (int p = -p_max; p <= p_max; ++p)
        for (int q = q_min; q <= depth; ++q) table.at_mut(p, q) = D(p, q);
    return table;
}

IdentityFitReport mode_resolvent_identity(const PhaseReducer& alpha,
                                          const eigenmode::EigenMode& mode,
                                          const ResolventTable& c_table,
                                          const ResolventTable& d_table, int p_max, int q_max) {
    if (p_max > c_table.p_max || q_max > c_table.q_max)
        throw DiffsysError("mode_resolvent_identity: range exceeds the c table");
    const auto& xi = mode.xi;
    cplx s = mode.s();

    std::vector<cplx> lhs, rhs;
    for (int p = -p_max; p <= p_max; ++p)
        for (int q = -q_max; q <= q_max; ++q) {
            cplx acc = 0.0;
            for (int n = xi.n_min; n <= xi.n_max; ++n) {
                if (!xi.contains(n + p)) continue;
                acc += alpha.lambda_pow(2LL * q * n) * xi.at(n) * xi.at(n + p);
            }
            cplx L = alpha.lambda_pow(static_cast<long long>(p) * q) * acc;
            cplx dval = (std::abs(q) <= d_table.q_max && std::abs(p) <= d_table.p_max)
                            ? d_table.at(p, q)
                            : cplx(0.0);
            cplx R = (c_table.at(p, q) - dval) * std::pow(s, q);
            lhs.push_back(L);
            rhs.push_back(R);
        }

    IdentityFitReport rep;
    rep.terms = static_cast<int>(lhs.size());
    cplx num = 0.0;
    double den = 0.0, rn = 0.0;
    for (size_t i = 0; i < lhs.size(); ++i) {
        num += std::conj(lhs[i]) * rhs[i];
        den += std::norm(lhs[i]);
        rn += std::norm(rhs[i]);
    }
    if (den < 1e-300) throw DiffsysError("mode_resolvent_identity: degenerate fit");
    rep.scale = num / den;
    rep.lhs_norm = std::sqrt(den);
    double r2 = 0.0;
    for (size_t i = 0; i < lhs.size(); ++i) r2 += std::norm(rep.scale * lhs[i] - rhs[i]);
    rep.rel_residual = std::sqrt(r2 / rn);
    return rep;
}

} // namespace amop::diffsys
