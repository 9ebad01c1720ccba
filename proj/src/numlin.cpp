#include "amop/numlin.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <memory>
#include <numeric>

namespace amop::numlin {

namespace {

// G = [[c, s], [-conj(s), c]] with c real, G*[a;b] = [r;0]
void make_givens(const cplx& a, const cplx& b, double& c, cplx& s) {
    double na = std::abs(a), nb = std::abs(b);
    if (nb == 0.0) {
        c = 1.0;
        s = 0.0;
        return;
    }
    double r = std::sqrt(na * na + nb * nb);
    if (na == 0.0) {
        c = 0.0;
        s = std::conj(b) / nb;
        return;
    }
    c = na / r;
    s = (a / na) * std::conj(b) / r;
}

void eig2x2(const cplx& a, const cplx& b, const cplx& c, const cplx& d, cplx& e1, cplx& e2) {
    cplx m = 0.5 * (a + d);
    cplx disc = std::sqrt(m * m - (a * d - b * c));
    e1 = m + disc;
    e2 = m - disc;
    if (std::abs(e1) > std::abs(e2)) {
        cplx det = a * d - b * c;
        if (e1 != cplx(0.0)) e2 = det / e1;
    }
}

struct DenseLU {
    int n;
    std::vector<cplx> a;
    std::vector<int> piv;
    double min_pivot = 0.0;

    explicit DenseLU(const ComplexMatrix& M) : n(M.rows), a(M.a), piv(M.rows) {
        min_pivot = DBL_MAX;
        for (int k = 0; k < n; ++k) {
            int p = k;
            double best = std::abs(a[static_cast<size_t>(k) * n + k]);
            for (int i = k + 1; i < n; ++i) {
                double v = std::abs(a[static_cast<size_t>(i) * n + k]);
                if (v > best) {
                    best = v;
                    p = i;
                }
            }
            piv[k] = p;
            if (p != k)
                for (int j = 0; j < n; ++j)
                    std::swap(a[static_cast<size_t>(k) * n + j], a[static_cast<size_t>(p) * n + j]);
            cplx pivot = a[static_cast<size_t>(k) * n + k];
            min_pivot = std::min(min_pivot, std::abs(pivot));
            if (pivot == cplx(0.0)) pivot = a[static_cast<size_t>(k) * n + k] = cplx(1e-300, 0.0);
            for (int i = k + 1; i < n; ++i) {
                cplx m = a[static_cast<size_t>(i) * n + k] / pivot;
                a[static_cast<size_t>(i) * n + k] = m;
                if (m != cplx(0.0))
                    for (int j = k + 1; j < n; ++j)
                        a[static_cast<size_t>(i) * n + j] -= m * a[static_cast<size_t>(k) * n + j];
            }
        }
    }

    void solve(std::vector<cplx>& b) const {
        for (int k = 0; k < n; ++k) {
            if (piv[k] != k) std::swap(b[k], b[piv[k]]);
            for (int i = k + 1; i < n; ++i) b[i] -= a[static_cast<size_t>(i) * n + k] * b[k];
        }
        for (int k = n - 1; k >= 0; --k) {
            for (int j = k + 1; j < n; ++j) b[k] -= a[static_cast<size_t>(k) * n + j] * b[j];
            b[k] /= a[static_cast<size_t>(k) * n + k];
        }
    }

    // solves A^H y = c using the same factorisation (A = P^T L U)
    void solve_adjoint(std::vector<cplx>& c) const {
        for (int k = 0; k < n; ++k) {
            for (int j = 0; j < k; ++j) c[k] -= std::conj(a[static_cast<size_t>(j) * n + k]) * c[j];
            c[k] /= std::conj(a[static_cast<size_t>(k) * n + k]);
        }
        for (int k = n - 1; k >= 0; --k)
            for (int i = k + 1; i < n; ++i) c[k] -= std::conj(a[static_cast<size_t>(i) * n + k]) * c[i];
        for (int k = n - 1; k >= 0; --k)
            if (piv[k] != k) std::swap(c[k], c[piv[k]]);
    }
};

} // namespace

std::vector<cplx> hessenberg_eigenvalues(const ComplexMatrix& M, double tol) {
    if (!M.square()) throw NumlinError("hessenberg_eigenvalues: matrix not square");
    if (tol <= 0.0) throw NumlinError("hessenberg_eigenvalues: tol must be positive");
    int n = M.rows;
    std::vector<cplx> h = M.a;
    auto H = [&](int i, int j) -> cplx& { return h[static_cast<size_t>(i) * n + j]; };

    // check whether the matrix is already upper Hessenberg
    bool hess = true;
    for (int j = 0; j < n && hess; ++j)
        for (int i = j + 2; i < n; ++i)
            if (H(i, j) != cplx(0.0)) {
                hess = false;
                break;
            }

    if (!hess) {
        // Householder reduction
        std::vector<cplx> v(n);
        for (int k = 0; k + 2 < n; ++k) {
            double xnorm = 0.0;
            for (int i = k + 1; i < n; ++i) xnorm += std::norm(H(i, k));
            xnorm = std::sqrt(xnorm);
            if (xnorm == 0.0) continue;
            cplx x0 = H(k + 1, k);
            cplx phase = (x0 == cplx(0.0)) ? cplx(1.0) : x0 / std::abs(x0);
            cplx alpha = -phase * xnorm;
            double vnorm2 = 0.0;
            for (int i = k + 1; i < n; ++i) {
                v[i] = H(i, k);
                if (i == k + 1) v[i] -= alpha;
                vnorm2 += std::norm(v[i]);
            }
            if (vnorm2 == 0.0) continue;
            // left: rows k+1..n-1
            for (int j = k; j < n; ++j) {
                cplx dot = 0.0;
                for (int i = k + 1; i < n; ++i) dot += std::conj(v[i]) * H(i, j);
                dot *= 2.0 / vnorm2;
                for (int i = k + 1; i < n; ++i) H(i, j) -= dot * v[i];
            }
            // right: cols k+1..n-1
            for (int i = 0; i < n; ++i) {
                cplx dot = 0.0;
                for (int j = k + 1; j < n; ++j) dot += H(i, j) * v[j];
                dot *= 2.0 / vnorm2;
                for (int j = k + 1; j < n; ++j) H(i, j) -= dot * std::conj(v[j]);
            }
        }
        for (int j = 0; j < n; ++j)
            for (int i = j + 2; i < n; ++i) H(i, j) = 0.0;
    }

    std::vector<cplx> eig;
    eig.reserve(n);
    const double eps = tol * DBL_EPSILON;
    int hi = n - 1;
    int iter_here = 0;
    const int max_iter_per_eig = 80;

    while (hi >= 0) {
        // deflate tiny subdiagonals
        for (int m = hi; m >= 1; --m) {
            double thr = eps * (std::abs(H(m - 1, m - 1)) + std::abs(H(m, m)));
            if (thr == 0.0) thr = eps;
            if (std::abs(H(m, m - 1)) <= thr) H(m, m - 1) = 0.0;
        }
        int lo = hi;
        while (lo > 0 && H(lo, lo - 1) != cplx(0.0)) --lo;

        if (lo == hi) {
            eig.push_back(H(hi, hi));
            --hi;
            iter_here = 0;
            continue;
        }
        // keep iterating 2x2 blocks: the Wilkinson shift deflates a normal
        // block in one step to full accuracy; fall back to the closed form
        // only on a defective stall, where sqrt(eps) error is inherent
        if (lo == hi - 1 && iter_here > 16) {
            cplx e1, e2;
            eig2x2(H(lo, lo), H(lo, hi), H(hi, lo), H(hi, hi), e1, e2);
            eig.push_back(e2);
            eig.push_back(e1);
            hi -= 2;
            iter_here = 0;
            continue;
        }

        if (++iter_here > max_iter_per_eig)
            throw NumlinError("hessenberg_eigenvalues: QR iteration stalled", hi);

        // Wilkinson shift from the trailing 2x2 of the active block
        cplx mu;
        {
            cplx e1, e2;
            eig2x2(H(hi - 1, hi - 1), H(hi - 1, hi), H(hi, hi - 1), H(hi, hi), e1, e2);
            mu = (std::abs(e1 - H(hi, hi)) < std::abs(e2 - H(hi, hi))) ? e1 : e2;
            if (iter_here % 13 == 12) // exceptional shift on stall
                mu = H(hi, hi) + 1.5 * std::abs(H(hi, hi - 1));
        }

        for (int i = lo; i <= hi; ++i) H(i, i) -= mu;
        std::vector<double> cs(hi - lo);
        std::vector<cplx> sn(hi - lo);
        for (int k = lo; k < hi; ++k) {
            double c;
            cplx s;
            make_givens(H(k, k), H(k + 1, k), c, s);
            cs[k - lo] = c;
            sn[k - lo] = s;
            for (int j = k; j <= hi; ++j) {
                cplx t1 = H(k, j), t2 = H(k + 1, j);
                H(k, j) = c * t1 + s * t2;
                H(k + 1, j) = -std::conj(s) * t1 + c * t2;
            }
        }
        for (int k = lo; k < hi; ++k) {
            double c = cs[k - lo];
            cplx s = sn[k - lo];
            int imax = std::min(k + 2, hi);
            for (int i = lo; i <= imax; ++i) {
                cplx t1 = H(i, k), t2 = H(i, k + 1);
                H(i, k) = c * t1 + std::conj(s) * t2;
                H(i, k + 1) = -s * t1 + c * t2;
            }
        }
        for (int i = lo; i <= hi; ++i) H(i, i) += mu;
    }
    return eig;
}

BandedLU::BandedLU(const ComplexMatrix& M, int kl, int ku) : n_(M.rows), kl_(kl), ku_(ku) {
    if (!M.square()) throw NumlinError("BandedLU: matrix not square");
    const int O = kl_ + ku_;
    ab_.assign(static_cast<size_t>(2 * kl_ + ku_ + 1) * n_, cplx(0.0));
    piv_.resize(n_);
    for (int j = 0; j < n_; ++j) {
        int i0 = std::max(0, j - ku_), i1 = std::min(n_ - 1, j + kl_);
        for (int i = i0; i <= i1; ++i) ab(O + i - j, j) = M.at(i, j);
    }
    min_pivot_ = DBL_MAX;
    int ju = 0;
    for (int j = 0; j < n_; ++j) {
        int jl = std::min(j + kl_, n_ - 1);
        int jp = j;
        double best = std::abs(ab(O, j));
        for (int i = j + 1; i <= jl; ++i) {
            double v = std::abs(ab(O + i - j, j));
            if (v > best) {
                best = v;
                jp = i;
            }
        }
        piv_[j] = jp;
        ju = std::max(ju, std::min(jp + ku_, n_ - 1));
        ju = std::max(ju, std::min(j + ku_, n_ - 1));
        if (jp != j)
            for (int c = j; c <= ju; ++c) std::swap(ab(O + jp - c, c), ab(O + j - c, c));
        cplx pivot = ab(O, j);
        min_pivot_ = std::min(min_pivot_, std::abs(pivot));
        if (pivot == cplx(0.0)) pivot = ab(O, j) = cplx(1e-300, 0.0);
        for (int i = j + 1; i <= jl; ++i) {
            cplx m = ab(O + i - j, j) / pivot;
            ab(O + i - j, j) = m;
            if (m != cplx(0.0))
                for (int c = j + 1; c <= ju; ++c) ab(O + i - c, c) -= m * ab(O + j - c, c);
        }
    }
}

void BandedLU::solve(std::vector<cplx>& b) const {
    const int O = kl_ + ku_;
    for (int j = 0; j < n_; ++j) {
        if (piv_[j] != j) std::swap(b[j], b[piv_[j]]);
        int jl = std::min(j + kl_, n_ - 1);
        for (int i = j + 1; i <= jl; ++i) b[i] -= ab(O + i - j, j) * b[j];
    }
    for (int j = n_ - 1; j >= 0; --j) {
        int jhi = std::min(n_ - 1, j + kl_ + ku_);
        for (int c = j + 1; c <= jhi; ++c) b[j] -= ab(O + j - c, c) * b[c];
        b[j] /= ab(O, j);
    }
}

void BandedLU::solve_adjoint(std::vector<cplx>& c) const {
    const int O = kl_ + ku_;
    for (int k = 0; k < n_; ++k) {
        int j0 = std::max(0, k - kl_ - ku_);
        for (int j = j0; j < k; ++j) c[k] -= std::conj(ab(O + j - k, k)) * c[j];
        c[k] /= std::conj(ab(O, k));
    }
    for (int k = n_ - 1; k >= 0; --k) {
        int il = std::min(k + kl_, n_ - 1);
        for (int i = k + 1; i <= il; ++i) c[k] -= std::conj(ab(O + i - k, k)) * c[i];
    }
    for (int k = n_ - 1; k >= 0; --k)
        if (piv_[k] != k) std::swap(c[k], c[piv_[k]]);
}

std::vector<cplx> banded_solve(const ComplexMatrix& M, const std::vector<cplx>& b) {
    if (!M.square()) throw NumlinError("banded_solve: matrix not square");
    if (static_cast<int>(b.size()) != M.rows) throw NumlinError("banded_solve: size mismatch");
    std::vector<cplx> x = b;
    double scale = M.frob_norm() / std::max(1, M.rows);
    if (M.has_band()) {
        BandedLU lu(M, M.band_lower, M.band_upper);
        if (lu.min_pivot() < 1e-280 * std::max(1.0, scale))
            throw NumlinError("banded_solve: singular pivot below threshold");
        lu.solve(x);
    } else {
        DenseLU lu(M);
        if (lu.min_pivot < 1e-280 * std::max(1.0, scale))
            throw NumlinError("banded_solve: singular pivot below threshold");
        lu.solve(x);
    }
    return x;
}

EigenPair inverse_iteration(const ComplexMatrix& M, cplx shift, double tol, int max_iter) {
    if (!M.square()) throw NumlinError("inverse_iteration: matrix not square");
    int n = M.rows;
    double mnorm = M.frob_norm();
    if (mnorm == 0.0) mnorm = 1.0;

    EigenPair out;
    cplx sh = shift;

    // one pair of solves (A - sh)w = v, (A - sh)^H u = y with the current
    // shift; perturbs the shift when the factorisation collapses
    auto apply_inverse = [&](std::vector<cplx>& w, std::vector<cplx>& y) {
        for (int attempt = 0;; ++attempt) {
            ComplexMatrix A = M;
            for (int i = 0; i < n; ++i) A.at(i, i) -= sh;
            double minpiv;
            std::vector<cplx> t = w, u = y;
            if (M.has_band()) {
                BandedLU lu(A, A.band_lower, A.band_upper);
                minpiv = lu.min_pivot();
                if (minpiv >= 1e-280) {
                    lu.solve(t);
                    lu.solve_adjoint(u);
                }
            } else {
                DenseLU lu(A);
                minpiv = lu.min_pivot;
                if (minpiv >= 1e-280) {
                    lu.solve(t);
                    lu.solve_adjoint(u);
                }
            }
            bool finite = minpiv >= 1e-280;
            if (finite)
                for (const auto& z : t)
                    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                        finite = false;
                        break;
                    }
            if (finite) {
                w = std::move(t);
                y = std::move(u);
                return;
            }
            if (attempt >= 2) throw NumlinError("inverse_iteration: singular solves at shift");
            sh += cplx(1.0, 1.0) * (1e-12 * mnorm);
            out.shift_perturbed = true;
        }
    };

    auto normalize = [](std::vector<cplx>& w) {
        double s = 0.0;
        for (const auto& z : w) s += std::norm(z);
        s = std::sqrt(s);
        if (!(s > 0.0) || !std::isfinite(s)) throw NumlinError("inverse_iteration: zero iterate");
        for (auto& z : w) z /= s;
    };

    Prng prng(0x5eedbeefULL);
    std::vector<cplx> v(n), y(n);
    for (auto& z : v) z = prng.complex_box();
    for (auto& z : y) z = prng.complex_box();
    normalize(v);
    normalize(y);

    // Two-sided (Ostrowski) iteration: a fixed shift alone stalls at the
    // shift error and the one-sided Rayleigh quotient drifts on non-normal
    // matrices, so the shift is refreshed from y^H M v / y^H v.
    for (int it = 1; it <= max_iter; ++it) {
        apply_inverse(v, y);
        normalize(v);
        normalize(y);
        std::vector<cplx> mv = M.matvec(v);
        cplx num = 0.0, den = 0.0;
        for (int i = 0; i < n; ++i) {
            num += std::conj(y[i]) * mv[i];
            den += std::conj(y[i]) * v[i];
        }
        cplx mu;
        if (std::abs(den) > 1e-12) {
            mu = num / den;
        } else {
            mu = 0.0;
            for (int i = 0; i < n; ++i) mu += std::conj(v[i]) * mv[i];
        }
        double res = 0.0;
        for (int i = 0; i < n; ++i) res += std::norm(mv[i] - mu * v[i]);
        res = std::sqrt(res);
        out.iterations = it;
        if (res <= tol * mnorm) {
            out.value = mu;
            out.vector = std::move(v);
            out.residual = res;
            return out;
        }
        if (it >= 2) sh = mu;
    }
    throw NumlinError("inverse_iteration: failed to converge");
}

namespace {

// One-sided Jacobi on the columns of B (rows >= cols).  Returns W = B*V in
// place of B and accumulates V when requested.
void jacobi_sweep(std::vector<cplx>& b, int m, int n, std::vector<cplx>* V) {
    auto col = [&](int j) { return b.begin() + static_cast<std::ptrdiff_t>(j) * m; };
    const double thresh = 1e-15;
    const int max_sweeps = 40;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (int i = 0; i < n - 1; ++i) {
            for (int j = i + 1; j < n; ++j) {
                auto bi = col(i);
                auto bj = col(j);
                double gii = 0.0, gjj = 0.0;
                cplx gij = 0.0;
                for (int k = 0; k < m; ++k) {
                    gii += std::norm(bi[k]);
                    gjj += std::norm(bj[k]);
                    gij += std::conj(bi[k]) * bj[k];
                }
                double off = std::abs(gij);
                if (off <= thresh * std::sqrt(gii * gjj) || off == 0.0) continue;
                rotated = true;
                cplx phase = gij / off;
                double zeta = (gjj - gii) / (2.0 * off);
                double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = t * c;
                cplx r21 = -s * std::conj(phase);
                cplx r22 = c * std::conj(phase);
                for (int k = 0; k < m; ++k) {
                    cplx x = bi[k], y = bj[k];
                    bi[k] = c * x + r21 * y;
                    bj[k] = s * x + r22 * y;
                }
                if (V) {
                    auto vi = V->begin() + static_cast<std::ptrdiff_t>(i) * n;
                    auto vj = V->begin() + static_cast<std::ptrdiff_t>(j) * n;
                    for (int k = 0; k < n; ++k) {
                        cplx x = vi[k], y = vj[k];
                        vi[k] = c * x + r21 * y;
                        vj[k] = s * x + r22 * y;
                    }
                }
            }
        }
        if (!rotated) break;
    }
}

} // namespace

std::vector<double> singular_values(const ComplexMatrix& M) {
    int m = M.rows, n = M.cols;
    bool transpose = m < n;
    int rows = transpose ? n : m;
    int cols = transpose ? m : n;
    // column-major working copy
    std::vector<cplx> b(static_cast<size_t>(rows) * cols);
    for (int i = 0; i < M.rows; ++i)
        for (int j = 0; j < M.cols; ++j) {
            cplx v = M.at(i, j);
            if (transpose)
                b[static_cast<size_t>(i) * rows + j] = std::conj(v);
            else
                b[static_cast<size_t>(j) * rows + i] = v;
        }
    jacobi_sweep(b, rows, cols, nullptr);
    std::vector<double> sv(cols);
    for (int j = 0; j < cols; ++j) {
        double s = 0.0;
        for (int k = 0; k < rows; ++k) s += std::norm(b[static_cast<size_t>(j) * rows + k]);
        sv[j] = std::sqrt(s);
    }
    std::sort(sv.begin(), sv.end(), std::greater<double>());
    return sv;
}

std::vector<cplx> lstsq_minnorm(const ComplexMatrix& A, const std::vector<cplx>& b, double rcond) {
    int m = A.rows, n = A.cols;
    if (static_cast<int>(b.size()) != m) throw NumlinError("lstsq_minnorm: size mismatch");
    bool transpose = m < n;
    int rows = transpose ? n : m;
    int cols = transpose ? m : n;
    std::vector<cplx> w(static_cast<size_t>(rows) * cols);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            cplx v = A.at(i, j);
            if (transpose)
                w[static_cast<size_t>(i) * rows + j] = std::conj(v);
            else
                w[static_cast<size_t>(j) * rows + i] = v;
        }
    std::vector<cplx> V(static_cast<size_t>(cols) * cols, cplx(0.0));
    for (int j = 0; j < cols; ++j) V[static_cast<size_t>(j) * cols + j] = 1.0;
    jacobi_sweep(w, rows, cols, &V);

    std::vector<double> sv(cols);
    double smax = 0.0;
    for (int j = 0; j < cols; ++j) {
        double s = 0.0;
        for (int k = 0; k < rows; ++k) s += std::norm(w[static_cast<size_t>(j) * rows + k]);
        sv[j] = std::sqrt(s);
        smax = std::max(smax, sv[j]);
    }
    std::vector<cplx> x(n, cplx(0.0));
    if (smax == 0.0) return x;
    for (int j = 0; j < cols; ++j) {
        if (sv[j] <= rcond * smax) continue;
        if (!transpose) {
            // A = U S V^H, columns of w are sigma*u. x += v_j (u_j^H b)/sigma_j
            cplx dot = 0.0;
            for (int k = 0; k < rows; ++k) dot += std::conj(w[static_cast<size_t>(j) * rows + k]) * b[k];
            dot /= sv[j] * sv[j];
            for (int k = 0; k < n; ++k) x[k] += V[static_cast<size_t>(j) * cols + k] * dot;
        } else {
            // A^H = U S V^H (U: n x m cols of w). A = V S U^H. x = U S^+ V^H b
            cplx dot = 0.0;
            for (int k = 0; k < cols; ++k) dot += std::conj(V[static_cast<size_t>(j) * cols + k]) * b[k];
            dot /= sv[j] * sv[j];
            for (int k = 0; k < n; ++k) x[k] += w[static_cast<size_t>(j) * rows + k] * dot;
        }
    }
    return x;
}

std::vector<double> symtridiag_eigenvalues(std::vector<double> d, std::vector<double> e) {
    int n = static_cast<int>(d.size());
    if (static_cast<int>(e.size()) != n - 1 && n > 0)
        throw NumlinError("symtridiag_eigenvalues: off-diagonal size mismatch");
    e.push_back(0.0);
    auto pythag = [](double a, double b) {
        double aa = std::fabs(a), ab = std::fabs(b);
        if (aa > ab) return aa * std::sqrt(1.0 + (ab / aa) * (ab / aa));
        return ab == 0.0 ? 0.0 : ab * std::sqrt(1.0 + (aa / ab) * (aa / ab));
    };
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= DBL_EPSILON * dd) break;
            }
            if (m != l) {
                if (++iter == 50) throw NumlinError("symtridiag_eigenvalues: too many iterations", l);
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = pythag(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::fabs(r) : -std::fabs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e[i], b = c * e[i];
                    r = pythag(f, g);
                    e[i + 1] = r;
                    if (r == 0.0 && i > l) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    if (r == 0.0) r = DBL_MIN;
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
    std::sort(d.begin(), d.end());
    return d;
}

ComplexMatrix random_matrix(int n, Prng& prng) {
    ComplexMatrix M(n, n);
    for (auto& z : M.a) z = prng.complex_box();
    return M;
}

ComplexMatrix random_unitary(int n, Prng& prng) {
    ComplexMatrix M = random_matrix(n, prng);
    // modified Gram-Schmidt on columns, twice
    for (int pass = 0; pass < 2; ++pass) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < j; ++k) {
                cplx dot = 0.0;
                for (int i = 0; i < n; ++i) dot += std::conj(M.at(i, k)) * M.at(i, j);
                for (int i = 0; i < n; ++i) M.at(i, j) -= dot * M.at(i, k);
            }
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += std::norm(M.at(i, j));
            s = std::sqrt(s);
            for (int i = 0; i < n; ++i) M.at(i, j) /= s;
        }
    }
    return M;
}

} // namespace amop::numlin
