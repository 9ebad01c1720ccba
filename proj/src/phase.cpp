#include "amop/phase.hpp"

namespace amop {

namespace {

struct DD {
    double hi, lo;
};

DD two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

DD two_prod(double a, double b) {
    double p = a * b;
    double err = std::fma(a, b, -p);
    return {p, err};
}

DD dd_add(DD a, DD b) {
    DD s = two_sum(a.hi, b.hi);
    double lo = s.lo + a.lo + b.lo;
    DD r = two_sum(s.hi, lo);
    return r;
}

DD dd_mul(DD a, DD b) {
    DD p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return two_sum(p.hi, p.lo);
}

DD dd_div(DD a, DD b) {
    double q1 = a.hi / b.hi;
    DD r = dd_add(a, dd_mul({-q1, 0.0}, b));
    double q2 = r.hi / b.hi;
    DD q = two_sum(q1, q2);
    return q;
}

} // namespace

PhaseReducer PhaseReducer::golden() {
    // sqrt(5) by one double-double Newton step from the double seed
    double s = std::sqrt(5.0);
    DD s2 = two_prod(s, s);
    DD num = dd_add({5.0, 0.0}, {-s2.hi, -s2.lo});
    DD corr = dd_div(num, {2.0 * s, 0.0});
    DD root = dd_add({s, 0.0}, corr);
    DD alpha = dd_div(dd_add(root, {-1.0, 0.0}), {2.0, 0.0});
    return {alpha.hi, alpha.lo, "golden"};
}

PhaseReducer PhaseReducer::rational(long long p, long long q) {
    if (q <= 0) throw std::invalid_argument("PhaseReducer::rational: q must be positive");
    DD alpha = dd_div({static_cast<double>(p), 0.0}, {static_cast<double>(q), 0.0});
    return {alpha.hi, alpha.lo, std::to_string(p) + "/" + std::to_string(q)};
}

double PhaseReducer::reduce_mod2(long long k) const {
    double kd = static_cast<double>(k); // exact for |k| < 2^53
    DD p = two_prod(hi_, kd);
    double r = std::fmod(p.hi, 2.0); // exact
    r += p.lo + lo_ * kd;
    r = std::fmod(r, 2.0);
    if (r >= 1.0) r -= 2.0;
    if (r < -1.0) r += 2.0;
    return r;
}

double PhaseReducer::diophantine_defect(int N) const {
    double worst = 0.0;
    for (int n = N / 2; n <= N; ++n) {
        double s = std::fabs(std::sin(kPi * reduce_mod2(n)));
        if (s == 0.0) throw std::domain_error("diophantine_defect: sin(pi alpha n) vanished");
        double v = std::pow(s, -1.0 / n);
        worst = std::max(worst, std::fabs(v - 1.0));
    }
    return worst;
}

PhaseReducer parse_alpha(const std::string& s) {
    if (s == "golden" || s.empty()) return PhaseReducer::golden();
    auto slash = s.find('/');
    if (slash == std::string::npos) throw std::invalid_argument("alpha must be 'golden' or 'p/q'");
    long long p = std::stoll(s.substr(0, slash));
    long long q = std::stoll(s.substr(slash + 1));
    return PhaseReducer::rational(p, q);
}

} // namespace amop
