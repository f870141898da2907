#pragma once

// Shared numerical kernels: adaptive Gauss-Kronrod quadrature (finite and
// semi-infinite), exponentials of complex tridiagonal generators, and a
// bracketed root finder.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace translume::numerics {

using cd = std::complex<double>;

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

template <class T>
struct QuadratureResult {
    T value{};
    double abs_error_estimate = 0.0;
    std::size_t evaluations = 0;
};

struct QuadratureOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    std::size_t max_evaluations = 10'000'000;
};

/// Decay of |f(z)| for z -> infinity: Exponential means ~exp(-rate z),
/// Algebraic means ~z^(-rate) with rate > 1.
struct DecayHint {
    enum class Kind { Exponential, Algebraic };
    Kind kind = Kind::Exponential;
    double rate = 1.0;

    static DecayHint exponential(double rate) { return {Kind::Exponential, rate}; }
    static DecayHint algebraic(double power) { return {Kind::Algebraic, power}; }
};

using RealIntegrand = std::function<double(double)>;
using ComplexIntegrand = std::function<cd(double)>;

/// Globally adaptive G7-K15 on [a, b]. Throws NoConvergence.
QuadratureResult<double> integrate(const RealIntegrand& f, double a, double b,
                                   const QuadratureOptions& opts = {});
QuadratureResult<cd> integrate(const ComplexIntegrand& f, double a, double b,
                               const QuadratureOptions& opts = {});

/// Integral over [a, inf). The primary estimate sums adaptive panels of unit
/// width on the axis u = log(z - a + 1) until the decay-hint tail bound drops
/// below the target; a second estimate on z = a + t/(1 - t) must agree with
/// it, and their difference is folded into the error estimate.
QuadratureResult<double> integrate_semi_infinite(const RealIntegrand& f, double a, DecayHint decay,
                                                 const QuadratureOptions& opts = {});
QuadratureResult<cd> integrate_semi_infinite(const ComplexIntegrand& f, double a, DecayHint decay,
                                             const QuadratureOptions& opts = {});

// ---------------------------------------------------------------------------
// Root finding
// ---------------------------------------------------------------------------

/// TOMS 748 on [lo, hi]. Stops when |f(root)| <= tol or the bracket is
/// narrower than tol * scale. Throws NoSignChange.
double find_root_bracketed(const std::function<double(double)>& f, double lo, double hi, double tol,
                           double scale = 1.0);

// ---------------------------------------------------------------------------
// Tridiagonal generators and their exponentials
// ---------------------------------------------------------------------------

/// Complex tridiagonal matrix. lower[i] = A(i, i-1), upper[i] = A(i, i+1);
/// lower[0] and upper[n-1] are stored as zero.
struct Tridiagonal {
    std::vector<cd> lower;
    std::vector<cd> diag;
    std::vector<cd> upper;

    Tridiagonal() = default;
    explicit Tridiagonal(std::size_t n) : lower(n), diag(n), upper(n) {}

    [[nodiscard]] std::size_t size() const { return diag.size(); }
    [[nodiscard]] double norm1() const;  // max column sum
    [[nodiscard]] Eigen::MatrixXcd dense() const;
    [[nodiscard]] Tridiagonal transposed() const;
    [[nodiscard]] Tridiagonal scaled(cd s) const;
};

inline constexpr std::size_t kMaxExpmDimension = 4097;
/// ||M d||_1 above this is refused: the scaling step would need more than
/// ~25 squarings and the Taylor action more than ~10^6 matvecs.
inline constexpr double kMaxExpmNorm = 1e7;

enum class ExpmMethod {
    PadeScalingSquaring,  // Higham 2005, degree <= 13
    OdeColumns,           // adaptive Dormand-Prince per column
};

struct ExpmOptions {
    ExpmMethod method = ExpmMethod::PadeScalingSquaring;
    bool self_check = false;   // run both methods and compare
    double check_tol = 1e-9;   // max-norm agreement, relative to max(1, ||P||_max)
    double ode_rtol = 1e-13;
};

/// Dense exp(M d). Throws DomainError for oversized input, OverflowRisk when
/// ||M d||_1 > kMaxExpmNorm, NoConvergence when self-check disagrees.
Eigen::MatrixXcd matrix_exponential_tridiag(const Tridiagonal& M, double d,
                                            const ExpmOptions& opts = {});

/// exp(M d) v by truncated Taylor series with scaling (Al-Mohy & Higham's
/// expmv without the norm-power refinement), after a trace shift. The
/// inner matvec runs through the SIMD dispatch table.
std::vector<cd> expm_action(const Tridiagonal& M, double d, std::span<const cd> v);

}  // namespace translume::numerics
