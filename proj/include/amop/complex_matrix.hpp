#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace amop {

using cplx = std::complex<double>;

// Dense row-major complex matrix with an optional bandwidth hint.  When the
// hint is set, entries outside the band are kept exactly zero by the
// assembly routines and the banded kernels rely on that.
struct ComplexMatrix {
    int rows = 0;
    int cols = 0;
    int band_lower = -1; // -1 means no hint
    int band_upper = -1;
    std::vector<cplx> a;

    ComplexMatrix() = default;
    ComplexMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {
        if (r < 1 || c < 1) throw std::invalid_argument("ComplexMatrix: rows, cols must be >= 1");
    }

    cplx& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const cplx& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    bool square() const { return rows == cols; }
    bool has_band() const { return band_lower >= 0 && band_upper >= 0; }

    void set_band_hint(int lower, int upper) {
        band_lower = lower;
        band_upper = upper;
    }

    std::vector<cplx> matvec(const std::vector<cplx>& x) const {
        std::vector<cplx> y(rows, cplx(0.0));
        for (int i = 0; i < rows; ++i) {
            cplx s = 0.0;
            int j0 = 0, j1 = cols;
            if (has_band()) {
                j0 = std::max(0, i - band_lower);
                j1 = std::min(cols, i + band_upper + 1);
            }
            for (int j = j0; j < j1; ++j) s += at(i, j) * x[j];
            y[i] = s;
        }
        return y;
    }

    double frob_norm() const {
        double s = 0.0;
        for (const auto& z : a) s += std::norm(z);
        return std::sqrt(s);
    }

    cplx trace() const {
        cplx t = 0.0;
        for (int i = 0; i < std::min(rows, cols); ++i) t += at(i, i);
        return t;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix m(cols, rows);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m.at(j, i) = std::conj(at(i, j));
        return m;
    }
};

} // namespace amop
