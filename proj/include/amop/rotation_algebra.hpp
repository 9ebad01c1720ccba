#pragma once

#include "amop/phase.hpp"

#include <map>
#include <stdexcept>
#include <vector>

namespace amop::rotalg {

// Finitely supported twisted Fourier series sum c_pq w_pq on the rotation
// algebra, w_pq = lambda^{-pq} u^p v^q with uv = lambda^2 vu.
class AlgebraElement {
public:
    struct Key {
        int p, q;
        bool operator<(const Key& o) const { return p < o.p || (p == o.p && q < o.q); }
        bool operator==(const Key& o) const { return p == o.p && q == o.q; }
    };

    explicit AlgebraElement(PhaseReducer alpha, double floor = 1e-16)
        : alpha_(alpha), floor_(floor) {}

    static AlgebraElement monomial(const PhaseReducer& alpha, int p, int q, cplx c = 1.0) {
        AlgebraElement e(alpha);
        e.add(p, q, c);
        return e;
    }
    static AlgebraElement unit(const PhaseReducer& alpha) { return monomial(alpha, 0, 0); }
    static AlgebraElement u(const PhaseReducer& alpha) { return monomial(alpha, 1, 0); }
    static AlgebraElement v(const PhaseReducer& alpha) { return monomial(alpha, 0, 1); }
    static AlgebraElement u_star(const PhaseReducer& alpha) { return monomial(alpha, -1, 0); }
    static AlgebraElement v_star(const PhaseReducer& alpha) { return monomial(alpha, 0, -1); }

    // h(delta) = u + u* + beta (delta v + delta^{-1} v*)
    static AlgebraElement harper(const PhaseReducer& alpha, double beta, cplx delta = 1.0);

    void add(int p, int q, cplx c) {
        auto [it, fresh] = coeffs_.try_emplace({p, q}, c);
        if (!fresh) it->second += c;
    }

    cplx coeff(int p, int q) const {
        auto it = coeffs_.find({p, q});
        return it == coeffs_.end() ? cplx(0.0) : it->second;
    }

    const std::map<Key, cplx>& coeffs() const { return coeffs_; }
    const PhaseReducer& alpha() const { return alpha_; }
    double floor() const { return floor_; }

    void prune() {
        for (auto it = coeffs_.begin(); it != coeffs_.end();)
            it = (std::abs(it->second) < floor_) ? coeffs_.erase(it) : std::next(it);
    }

    size_t support_size() const { return coeffs_.size(); }

    double coeff_sup_norm() const {
        double m = 0.0;
        for (const auto& [k, c] : coeffs_) m = std::max(m, std::abs(c));
        return m;
    }

private:
    PhaseReducer alpha_;
    double floor_;
    std::map<Key, cplx> coeffs_;
};

struct IntegerMatrix2 {
    long long a, b, c, d;
    long long det() const { return a * d - b * c; }
};

struct AlgebraError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

AlgebraElement multiply(const AlgebraElement& x, const AlgebraElement& y);
AlgebraElement add(const AlgebraElement& x, const AlgebraElement& y);
AlgebraElement scale(const AlgebraElement& x, cplx s);
AlgebraElement adjoint(const AlgebraElement& x);
cplx trace(const AlgebraElement& x);

// transport of coefficients along (p,q) -> A(p,q); automorphism when
// det A = 1, product-reversing isometry when det A = -1
AlgebraElement gl2z_isometry(const IntegerMatrix2& A, const AlgebraElement& x);

// truncated Neumann series for (s + beta)^{-1}, s a unitary monomial, beta > 1
AlgebraElement neumann_inverse(const AlgebraElement& s, double beta, int order);

// the parameter-flipping automorphism, applied through its generator images
// at the given Neumann truncation order
AlgebraElement rho_beta(const AlgebraElement& x, double beta, int order);

// trace of harper(alpha, beta)^n
cplx moment(const PhaseReducer& alpha, double beta, int n);

// x^n by binary exponentiation with re-pruning; n may be negative for a
// unitary x (inverse taken as adjoint)
AlgebraElement unitary_power(const AlgebraElement& x, int n);

} // namespace amop::rotalg
