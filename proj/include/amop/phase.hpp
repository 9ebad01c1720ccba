#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace amop {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Frequency alpha stored as an unevaluated two-double sum (hi + lo), so that
// alpha * k mod 2 stays accurate for integer multipliers as large as n^2 with
// |n| up to ~1e6.  The reduction uses exact fmod on the hi product plus the
// two_prod rounding term.
class PhaseReducer {
public:
    PhaseReducer() = default;
    PhaseReducer(double hi, double lo, std::string id) : hi_(hi), lo_(lo), id_(std::move(id)) {}

    // (sqrt(5)-1)/2, refined to double-double accuracy at construction
    static PhaseReducer golden();

    // continued-fraction convergent p/q of the golden mean (or any rational)
    static PhaseReducer rational(long long p, long long q);

    double value() const { return hi_ + lo_; }
    double hi() const { return hi_; }
    double lo() const { return lo_; }
    const std::string& id() const { return id_; }

    bool same_as(const PhaseReducer& other) const { return hi_ == other.hi_ && lo_ == other.lo_; }

    // alpha * k reduced into [-1, 1)
    double reduce_mod2(long long k) const;

    // lambda^k = e^{i pi alpha k}
    cplx lambda_pow(long long k) const {
        double r = reduce_mod2(k);
        return {std::cos(kPi * r), std::sin(kPi * r)};
    }

    // e^{i pi alpha n^2}
    cplx w_phase(long long n) const { return lambda_pow(n * n); }

    // e^{-2 pi i alpha n power} (diagonal of v^power)
    cplx v_phase(long long n, long long power = 1) const { return lambda_pow(-2 * n * power); }

    // checks |sin(pi alpha n)|^{-1/n} -> 1 along n = 1..N; returns the max of
    // | |sin(pi alpha n)|^{-1/n} - 1 | over the tail n in [N/2, N]
    double diophantine_defect(int N) const;

private:
    double hi_ = 0.0;
    double lo_ = 0.0;
    std::string id_;
};

// parses "golden" or "p/q"
PhaseReducer parse_alpha(const std::string& s);

} // namespace amop
