#pragma once

// Data-parallel kernels on interleaved complex<double> arrays. Every kernel
// has a scalar reference implementation; x86-64 builds add an AVX2+FMA
// variant chosen at runtime. Setting TRANSLUME_SIMD=scalar forces the
// reference path.

#include <complex>
#include <cstddef>

namespace translume::simd {

using cd = std::complex<double>;

enum class Isa { Scalar, Avx2 };

const char* to_string(Isa isa);

struct TridiagView {
    const cd* lower;
    const cd* diag;
    const cd* upper;
    std::size_t n;
};

struct KernelTable {
    Isa isa;
    /// y = scale * A x. Returns max_i |y_i|.
    double (*tridiag_matvec)(TridiagView A, const cd* x, cd* y, double scale);
    /// f += y. Returns max_i |f_i|.
    double (*accumulate)(const cd* y, cd* f, std::size_t n);
    /// x *= a.
    void (*scale)(cd* x, cd a, std::size_t n);
    /// sum_i w_i |x_i|^2
    double (*weighted_norm2)(const double* w, const cd* x, std::size_t n);
};

[[nodiscard]] bool supported(Isa isa);
/// Table for a specific ISA; throws std::invalid_argument if unsupported.
[[nodiscard]] const KernelTable& kernels(Isa isa);
/// Table selected at first use (best supported ISA unless overridden).
[[nodiscard]] const KernelTable& kernels();

namespace detail {
extern const KernelTable scalar_table;
#if defined(TRANSLUME_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif
}  // namespace detail

}  // namespace translume::simd
