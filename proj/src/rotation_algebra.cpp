#include "amop/rotation_algebra.hpp"

namespace amop::rotalg {

AlgebraElement AlgebraElement::harper(const PhaseReducer& alpha, double beta, cplx delta) {
    AlgebraElement h(alpha);
    h.add(1, 0, 1.0);
    h.add(-1, 0, 1.0);
    h.add(0, 1, beta * delta);
    h.add(0, -1, beta / delta);
    return h;
}

AlgebraElement multiply(const AlgebraElement& x, const AlgebraElement& y) {
    if (!x.alpha().same_as(y.alpha())) throw AlgebraError("multiply: alpha mismatch");
    AlgebraElement out(x.alpha(), std::min(x.floor(), y.floor()));
    for (const auto& [kx, cx] : x.coeffs())
        for (const auto& [ky, cy] : y.coeffs()) {
            long long twist = static_cast<long long>(kx.p) * ky.q -
                              static_cast<long long>(kx.q) * ky.p;
            out.add(kx.p + ky.p, kx.q + ky.q, x.alpha().lambda_pow(twist) * cx * cy);
        }
    out.prune();
    return out;
}

AlgebraElement add(const AlgebraElement& x, const AlgebraElement& y) {
    if (!x.alpha().same_as(y.alpha())) throw AlgebraError("add: alpha mismatch");
    AlgebraElement out = x;
    for (const auto& [k, c] : y.coeffs()) out.add(k.p, k.q, c);
    out.prune();
    return out;
}

AlgebraElement scale(const AlgebraElement& x, cplx s) {
    AlgebraElement out(x.alpha(), x.floor());
    for (const auto& [k, c] : x.coeffs()) out.add(k.p, k.q, s * c);
    out.prune();
    return out;
}

AlgebraElement adjoint(const AlgebraElement& x) {
    AlgebraElement out(x.alpha(), x.floor());
    for (const auto& [k, c] : x.coeffs()) out.add(-k.p, -k.q, std::conj(c));
    return out;
}

cplx trace(const AlgebraElement& x) { return x.coeff(0, 0); }

AlgebraElement gl2z_isometry(const IntegerMatrix2& A, const AlgebraElement& x) {
    if (A.det() != 1 && A.det() != -1) throw AlgebraError("gl2z_isometry: |det| != 1");
    AlgebraElement out(x.alpha(), x.floor());
    for (const auto& [k, c] : x.coeffs()) {
        long long p = A.a * k.p + A.b * k.q;
        long long q = A.c * k.p + A.d * k.q;
        out.add(static_cast<int>(p), static_cast<int>(q), c);
    }
    return out;
}

AlgebraElement neumann_inverse(const AlgebraElement& s, double beta, int order) {
    if (beta <= 1.0) throw AlgebraError("neumann_inverse: requires beta > 1");
    if (s.support_size() != 1) throw AlgebraError("neumann_inverse: s must be a monomial");
    if (std::abs(std::abs(s.coeffs().begin()->second) - 1.0) > 1e-12)
        throw AlgebraError("neumann_inverse: monomial must be unitary");
    if (order < 0) throw AlgebraError("neumann_inverse: order must be >= 0");

    AlgebraElement out(s.alpha(), s.floor());
    AlgebraElement pw = AlgebraElement::unit(s.alpha());
    double coef = 1.0 / beta;
    for (int n = 0; n <= order; ++n) {
        for (const auto& [k, c] : pw.coeffs()) out.add(k.p, k.q, coef * c);
        if (n < order) {
            pw = multiply(pw, s);
            coef *= -1.0 / beta;
        }
    }
    out.prune();
    return out;
}

AlgebraElement unitary_power(const AlgebraElement& x, int n) {
    const auto& alpha = x.alpha();
    if (n == 0) return AlgebraElement::unit(alpha);
    AlgebraElement base = n > 0 ? x : adjoint(x);
    int e = n > 0 ? n : -n;
    AlgebraElement acc = AlgebraElement::unit(alpha);
    while (e > 0) {
        if (e & 1) {
            acc = multiply(acc, base);
            acc.prune();
        }
        e >>= 1;
        if (e) {
            base = multiply(base, base);
            base.prune();
        }
    }
    return acc;
}

AlgebraElement rho_beta(const AlgebraElement& x, double beta, int order) {
    if (beta <= 1.0) throw AlgebraError("rho_beta: requires beta > 1");
    const auto& alpha = x.alpha();
    auto u = AlgebraElement::u(alpha);
    auto v = AlgebraElement::v(alpha);
    auto uv = multiply(u, v);
    auto inv = neumann_inverse(uv, beta, order);              // (uv + beta)^{-1}
    auto right = add(adjoint(uv), scale(AlgebraElement::unit(alpha), beta)); // v*u* + beta
    auto tail = multiply(inv, right);
    auto rho_v = multiply(v, tail);
    auto rho_u = multiply(multiply(v, u), multiply(v, tail));

    AlgebraElement out(alpha, x.floor());
    for (const auto& [k, c] : x.coeffs()) {
        auto term = multiply(unitary_power(rho_u, k.p), unitary_power(rho_v, k.q));
        cplx amp = c * alpha.lambda_pow(-static_cast<long long>(k.p) * k.q);
        for (const auto& [kt, ct] : term.coeffs()) out.add(kt.p, kt.q, amp * ct);
    }
    out.prune();
    return out;
}

cplx moment(const PhaseReducer& alpha, double beta, int n) {
    if (n < 1) throw AlgebraError("moment: n must be >= 1");
    auto h = AlgebraElement::harper(alpha, beta);
    AlgebraElement p = h;
    for (int k = 1; k < n; ++k) p = multiply(p, h);
    return trace(p);
}

} // namespace amop::rotalg
