#pragma once

// Floquet coupled-mode transmission of the finite grating window.
//
// Inside an impedance-matched medium (eps = mu) the forward wave F = E + H
// obeys the one-way equation
//     d/dx F + (1/c0) d/dt (eps F) = 0,  eps = eps_b + 2 alpha cos(g x - Omega t).
// Expanding F = sum_n b_n(x) exp(i n g x - i w_n t) with w_n = w + n Omega and
// collecting the exp(i n g x - i w_n t) terms gives
//     b_n' = i (w_n eps_b / c0 - n g) b_n + i alpha w_n / c0 (b_{n-1} + b_{n+1}),
// since eps F carries alpha e^{+-i(g x - Omega t)} b_{n-+1} into rung n and
// d/dt then brings down -i w_n. The generator M is x-independent, so the
// amplitudes after the window are exactly t = exp(M d) applied to the input.

#include "translume/grating.hpp"
#include "translume/numerics.hpp"

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace translume {

using cd = std::complex<double>;

inline constexpr int kAutoStartRungs = 64;
/// Largest N_max tried by Auto: dimension 2 * 2048 + 1 = 4097.
inline constexpr int kMaxRungs = 2048;
inline constexpr double kConserveTol = 1e-6;
inline constexpr double kLeakageTol = 1e-8;

/// Rows w_n = omega_base + n Omega for n in [-N_max, N_max]; index n + N_max.
[[nodiscard]] numerics::Tridiagonal coupling_matrix(const GratingConfig& cfg, double omega_base, int N_max);

struct Truncation {
    bool automatic = true;
    int N_max = kAutoStartRungs;

    static Truncation fixed(int N_max) { return {false, N_max}; }
    static Truncation auto_() { return {true, kAutoStartRungs}; }
};

/// Rungs with |n| > N_max - margin form the boundary layer: they are excluded
/// from conservation sums and monitored for leakage.
[[nodiscard]] int boundary_margin(int N_max);

struct TransmissionLadder {
    double omega_base = 0.0;
    double Omega = 0.0;
    int N_max = 0;
    Eigen::MatrixXcd t;  // t(n' + N_max, n + N_max): input rung n -> output rung n'
    bool converged = false;

    [[nodiscard]] double omega(int n) const { return omega_base + n * Omega; }
    [[nodiscard]] cd amp(int n_out, int n_in) const { return t(n_out + N_max, n_in + N_max); }
};

/// Auto doubles N_max from 64 until every input |n| <= checked_inputs has
/// conservation residual < kConserveTol and leakage < kLeakageTol. Throws
/// NoConvergence past kMaxRungs. Fixed truncation never throws for lack of
/// convergence; `converged` then reports the same test.
[[nodiscard]] TransmissionLadder transmission_ladder(const GratingConfig& cfg, double omega_base, Truncation trunc,
                                                     int checked_inputs = 8,
                                                     const numerics::ExpmOptions& opts = {});

/// |sum over interior n' of (w_n / w_n') |t_{n'n}|^2 - 1|.
[[nodiscard]] double conservation_residual(const TransmissionLadder& ladder, int n_in);
/// max |t_{n'n}| over the boundary layer.
[[nodiscard]] double boundary_leakage(const TransmissionLadder& ladder, int n_in);

/// One column (fixed input rung) or one row (fixed output rung) of the
/// ladder, computed as the action of exp(M d) or exp(M^T d) on a unit vector.
struct RungVector {
    double omega_base = 0.0;
    double Omega = 0.0;
    int N_max = 0;
    int fixed_rung = 0;
    bool is_row = false;
    std::vector<cd> amp;  // index n + N_max
    bool converged = false;

    [[nodiscard]] double omega(int n) const { return omega_base + n * Omega; }
    [[nodiscard]] cd at(int n) const { return amp[static_cast<std::size_t>(n + N_max)]; }
};

/// Column: sum over interior n' of (w_fixed / w_n') |t_{n', fixed}|^2.
/// Row: sum over interior n of (w_n / w_fixed) |t_{fixed, n}|^2.
[[nodiscard]] double conservation_residual(const RungVector& v);
[[nodiscard]] double boundary_leakage(const RungVector& v);

[[nodiscard]] RungVector transmission_column(const GratingConfig& cfg, double omega_base, int n_in, Truncation trunc);
[[nodiscard]] RungVector transmission_row(const GratingConfig& cfg, double omega_base, int n_out, Truncation trunc);

/// Periodic composition over N windows of temporal period Delta_g.
struct WindowKernel {
    int N_periods = 1;
    double Delta_g = 0.0;
};

/// (1 / (pi N)) sin^2(N x) / sin^2(x), equal to N / pi at x = m pi.
[[nodiscard]] double window_kernel_weight(const WindowKernel& kernel, double x);
[[nodiscard]] std::vector<double> window_kernel_weights(const WindowKernel& kernel, std::span<const double> x);

}  // namespace translume
