// Compiled with -mavx2 -mfma. Only reachable through the dispatcher after
// a runtime CPU check.

#include "translume/simd.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace translume::simd {
namespace {

// Two interleaved complex<double> per register: [re0, im0, re1, im1].
inline __m256d load2(const cd* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cd* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

inline __m256d cmul(__m256d a, __m256d x) {
    const __m256d a_re = _mm256_movedup_pd(a);         // re re
    const __m256d a_im = _mm256_permute_pd(a, 0xF);    // im im
    const __m256d x_sw = _mm256_permute_pd(x, 0x5);    // swap re/im
    return _mm256_fmaddsub_pd(a_re, x, _mm256_mul_pd(a_im, x_sw));
}

// Per-lane |z|^2 broadcast into both halves of each complex slot.
inline __m256d abs2(__m256d v) {
    const __m256d sq = _mm256_mul_pd(v, v);
    return _mm256_hadd_pd(sq, sq);
}

inline double hmax(__m256d v) {
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, v);
    return std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
}

inline double abs2_scalar(cd z) { return z.real() * z.real() + z.imag() * z.imag(); }

inline cd mul_scalar(cd a, cd b) {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

double tridiag_matvec(TridiagView A, const cd* x, cd* y, double scale) {
    const std::size_t n = A.n;
    if (n < 4) return detail::scalar_table.tridiag_matvec(A, x, y, scale);

    const __m256d s = _mm256_set1_pd(scale);
    __m256d peak = _mm256_setzero_pd();

    y[0] = scale * (mul_scalar(A.diag[0], x[0]) + mul_scalar(A.upper[0], x[1]));
    double peak_edge = abs2_scalar(y[0]);

    std::size_t i = 1;
    for (; i + 2 < n; i += 2) {
        __m256d acc = cmul(load2(A.diag + i), load2(x + i));
        acc = _mm256_add_pd(acc, cmul(load2(A.lower + i), load2(x + i - 1)));
        acc = _mm256_add_pd(acc, cmul(load2(A.upper + i), load2(x + i + 1)));
        acc = _mm256_mul_pd(acc, s);
        store2(y + i, acc);
        peak = _mm256_max_pd(peak, abs2(acc));
    }
    for (; i + 1 < n; ++i) {
        const cd v = mul_scalar(A.lower[i], x[i - 1]) + mul_scalar(A.diag[i], x[i]) +
                     mul_scalar(A.upper[i], x[i + 1]);
        y[i] = scale * v;
        peak_edge = std::max(peak_edge, abs2_scalar(y[i]));
    }
    y[n - 1] = scale * (mul_scalar(A.lower[n - 1], x[n - 2]) + mul_scalar(A.diag[n - 1], x[n - 1]));
    peak_edge = std::max(peak_edge, abs2_scalar(y[n - 1]));
    return std::sqrt(std::max(peak_edge, hmax(peak)));
}

double accumulate(const cd* y, cd* f, std::size_t n) {
    __m256d peak = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d v = _mm256_add_pd(load2(f + i), load2(y + i));
        store2(f + i, v);
        peak = _mm256_max_pd(peak, abs2(v));
    }
    double tail = 0.0;
    for (; i < n; ++i) {
        f[i] += y[i];
        tail = std::max(tail, abs2_scalar(f[i]));
    }
    return std::sqrt(std::max(tail, hmax(peak)));
}

void scale(cd* x, cd a, std::size_t n) {
    const __m256d av = _mm256_setr_pd(a.real(), a.imag(), a.real(), a.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) store2(x + i, cmul(av, load2(x + i)));
    for (; i < n; ++i) x[i] = mul_scalar(a, x[i]);
}

double weighted_norm2(const double* w, const cd* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        // [w0 w0 w1 w1] * [re0^2 im0^2 re1^2 im1^2]
        const __m128d w2 = _mm_loadu_pd(w + i);
        const __m256d ww = _mm256_permute4x64_pd(_mm256_castpd128_pd256(w2), 0x50);
        const __m256d v = load2(x + i);
        acc = _mm256_fmadd_pd(ww, _mm256_mul_pd(v, v), acc);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i) s += w[i] * abs2_scalar(x[i]);
    return s;
}

}  // namespace

namespace detail {
const KernelTable avx2_table{Isa::Avx2, &tridiag_matvec, &accumulate, &scale, &weighted_norm2};
}

}  // namespace translume::simd
