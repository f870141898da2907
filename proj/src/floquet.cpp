#include "translume/floquet.hpp"

#include "translume/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace translume {

numerics::Tridiagonal coupling_matrix(const GratingConfig& cfg, double omega_base, int N_max) {
    if (N_max < 1) throw DomainError("coupling_matrix: N_max must be >= 1");
    const auto dim = static_cast<std::size_t>(2 * N_max + 1);
    numerics::Tridiagonal M(dim);
    for (int n = -N_max; n <= N_max; ++n) {
        const auto i = static_cast<std::size_t>(n + N_max);
        const double w = omega_base + n * cfg.Omega;
        const double k = cfg.alpha * w / cfg.c0;
        M.diag[i] = {0.0, w * cfg.eps_b / cfg.c0 - n * cfg.g};
        if (i > 0) M.lower[i] = {0.0, k};
        if (i + 1 < dim) M.upper[i] = {0.0, k};
    }
    return M;
}

int boundary_margin(int N_max) { return std::max(1, N_max / 16); }

namespace {

void check_input(const GratingConfig& cfg, Truncation trunc) {
    cfg.validate();
    if (!trunc.automatic && (trunc.N_max < 1 || trunc.N_max > kMaxRungs)) {
        throw DomainError("N_max must lie in [1, " + std::to_string(kMaxRungs) + "]");
    }
}

// Sums over interior rungs; `weight(n)` multiplies |a_n|^2.
template <class Amp, class Weight>
double interior_residual(int N_max, const Amp& amp, const Weight& weight) {
    const int inner = N_max - boundary_margin(N_max);
    double sum = 0.0;
    for (int n = -inner; n <= inner; ++n) sum += weight(n) * std::norm(amp(n));
    return std::abs(sum - 1.0);
}

template <class Amp>
double layer_max(int N_max, const Amp& amp) {
    const int inner = N_max - boundary_margin(N_max);
    double m = 0.0;
    for (int n = inner + 1; n <= N_max; ++n) m = std::max({m, std::abs(amp(n)), std::abs(amp(-n))});
    return m;
}

}  // namespace

double conservation_residual(const TransmissionLadder& L, int n_in) {
    const double w_in = L.omega(n_in);
    if (w_in == 0.0) return 0.0;  // the zero-frequency rung carries no pseudo-photons
    return interior_residual(L.N_max, [&](int n) { return L.amp(n, n_in); },
                             [&](int n) { return L.omega(n) == 0.0 ? 0.0 : w_in / L.omega(n); });
}

double boundary_leakage(const TransmissionLadder& L, int n_in) {
    return layer_max(L.N_max, [&](int n) { return L.amp(n, n_in); });
}

namespace {

bool ladder_ok(const TransmissionLadder& L, int checked_inputs) {
    const int c = std::min(checked_inputs, L.N_max - boundary_margin(L.N_max));
    for (int n = -c; n <= c; ++n) {
        if (conservation_residual(L, n) >= kConserveTol || boundary_leakage(L, n) >= kLeakageTol) return false;
    }
    return true;
}

TransmissionLadder build_ladder(const GratingConfig& cfg, double omega_base, int N_max,
                                const numerics::ExpmOptions& opts) {
    TransmissionLadder L;
    L.omega_base = omega_base;
    L.Omega = cfg.Omega;
    L.N_max = N_max;
    L.t = numerics::matrix_exponential_tridiag(coupling_matrix(cfg, omega_base, N_max), cfg.d, opts);
    return L;
}

}  // namespace

TransmissionLadder transmission_ladder(const GratingConfig& cfg, double omega_base, Truncation trunc,
                                       int checked_inputs, const numerics::ExpmOptions& opts) {
    check_input(cfg, trunc);
    if (!trunc.automatic) {
        auto L = build_ladder(cfg, omega_base, trunc.N_max, opts);
        L.converged = ladder_ok(L, checked_inputs);
        return L;
    }
    for (int N = kAutoStartRungs; N <= kMaxRungs; N *= 2) {
        auto L = build_ladder(cfg, omega_base, N, opts);
        if (ladder_ok(L, checked_inputs)) {
            L.converged = true;
            return L;
        }
    }
    throw NoConvergence("transmission_ladder: not converged at N_max = " + std::to_string(kMaxRungs));
}

double conservation_residual(const RungVector& v) {
    const double w_fixed = v.omega(v.fixed_rung);
    if (w_fixed == 0.0) return 0.0;
    return interior_residual(v.N_max, [&](int n) { return v.at(n); }, [&](int n) {
        const double w = v.omega(n);
        if (v.is_row) return w / w_fixed;
        return w == 0.0 ? 0.0 : w_fixed / w;
    });
}

double boundary_leakage(const RungVector& v) {
    return layer_max(v.N_max, [&](int n) { return v.at(n); });
}

namespace {

RungVector build_vector(const GratingConfig& cfg, double omega_base, int fixed, bool row, int N_max) {
    if (std::abs(fixed) > N_max - boundary_margin(N_max)) {
        throw DomainError("rung " + std::to_string(fixed) + " lies in the boundary layer of N_max = " +
                          std::to_string(N_max));
    }
    RungVector v;
    v.omega_base = omega_base;
    v.Omega = cfg.Omega;
    v.N_max = N_max;
    v.fixed_rung = fixed;
    v.is_row = row;
    auto M = coupling_matrix(cfg, omega_base, N_max);
    if (row) M = M.transposed();
    std::vector<cd> e(static_cast<std::size_t>(2 * N_max + 1), cd{0.0, 0.0});
    e[static_cast<std::size_t>(fixed + N_max)] = 1.0;
    v.amp = numerics::expm_action(M, cfg.d, e);
    v.converged = conservation_residual(v) < kConserveTol && boundary_leakage(v) < kLeakageTol;
    return v;
}

RungVector solve_vector(const GratingConfig& cfg, double omega_base, int fixed, bool row, Truncation trunc) {
    check_input(cfg, trunc);
    if (!trunc.automatic) return build_vector(cfg, omega_base, fixed, row, trunc.N_max);
    int N = kAutoStartRungs;
    while (std::abs(fixed) > N - boundary_margin(N)) N *= 2;
    for (; N <= kMaxRungs; N *= 2) {
        auto v = build_vector(cfg, omega_base, fixed, row, N);
        if (v.converged) return v;
    }
    throw NoConvergence(std::string("transmission ") + (row ? "row " : "column ") + std::to_string(fixed) +
                        ": not converged at N_max = " + std::to_string(kMaxRungs));
}

}  // namespace

RungVector transmission_column(const GratingConfig& cfg, double omega_base, int n_in, Truncation trunc) {
    return solve_vector(cfg, omega_base, n_in, false, trunc);
}

RungVector transmission_row(const GratingConfig& cfg, double omega_base, int n_out, Truncation trunc) {
    return solve_vector(cfg, omega_base, n_out, true, trunc);
}

double window_kernel_weight(const WindowKernel& kernel, double x) {
    if (kernel.N_periods < 1) throw DomainError("window kernel needs N >= 1");
    const double N = kernel.N_periods;
    const double r = x - std::round(x / std::numbers::pi) * std::numbers::pi;
    if (std::abs(r) < 1e-6) {
        // sin(N x) / sin(x) = +-N (1 - (N^2 - 1) r^2 / 6 + ...)
        const double ratio = N * (1.0 - (N * N - 1.0) * r * r / 6.0);
        return ratio * ratio / (std::numbers::pi * N);
    }
    const double s = std::sin(N * r) / std::sin(r);
    return s * s / (std::numbers::pi * N);
}

std::vector<double> window_kernel_weights(const WindowKernel& kernel, std::span<const double> x) {
    std::vector<double> out;
    out.reserve(x.size());
    for (double v : x) out.push_back(window_kernel_weight(kernel, v));
    return out;
}

}  // namespace translume
