#include "translume/simd.hpp"

#include <algorithm>
#include <cmath>

namespace translume::simd {
namespace {

// Written out by hand: std::complex operator* goes through __muldc3 for
// inf/nan recovery, which is several times slower than the plain formula.
inline cd mul(cd a, cd b) {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

inline double abs2(cd z) { return z.real() * z.real() + z.imag() * z.imag(); }

double tridiag_matvec(TridiagView A, const cd* x, cd* y, double scale) {
    const std::size_t n = A.n;
    if (n == 0) return 0.0;
    double peak = 0.0;
    if (n == 1) {
        y[0] = scale * mul(A.diag[0], x[0]);
        return std::sqrt(abs2(y[0]));
    }
    y[0] = scale * (mul(A.diag[0], x[0]) + mul(A.upper[0], x[1]));
    peak = abs2(y[0]);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const cd v = mul(A.lower[i], x[i - 1]) + mul(A.diag[i], x[i]) + mul(A.upper[i], x[i + 1]);
        y[i] = scale * v;
        peak = std::max(peak, abs2(y[i]));
    }
    y[n - 1] = scale * (mul(A.lower[n - 1], x[n - 2]) + mul(A.diag[n - 1], x[n - 1]));
    peak = std::max(peak, abs2(y[n - 1]));
    return std::sqrt(peak);
}

double accumulate(const cd* y, cd* f, std::size_t n) {
    double peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        f[i] += y[i];
        peak = std::max(peak, abs2(f[i]));
    }
    return std::sqrt(peak);
}

void scale(cd* x, cd a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] = mul(a, x[i]);
}

double weighted_norm2(const double* w, const cd* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * abs2(x[i]);
    return s;
}

}  // namespace

namespace detail {
const KernelTable scalar_table{Isa::Scalar, &tridiag_matvec, &accumulate, &scale, &weighted_norm2};
}

}  // namespace translume::simd
