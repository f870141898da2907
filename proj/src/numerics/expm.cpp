#include "translume/errors.hpp"
#include "translume/numerics.hpp"
#include "translume/simd.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace translume::numerics {

double Tridiagonal::norm1() const {
    const std::size_t n = size();
    double best = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double col = std::abs(diag[j]);
        if (j > 0) col += std::abs(upper[j - 1]);
        if (j + 1 < n) col += std::abs(lower[j + 1]);
        best = std::max(best, col);
    }
    return best;
}

Eigen::MatrixXcd Tridiagonal::dense() const {
    const auto n = static_cast<Eigen::Index>(size());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out(i, i) = diag[i];
        if (i > 0) out(i, i - 1) = lower[i];
        if (i + 1 < n) out(i, i + 1) = upper[i];
    }
    return out;
}

Tridiagonal Tridiagonal::transposed() const {
    const std::size_t n = size();
    Tridiagonal t(n);
    t.diag = diag;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        t.upper[i] = lower[i + 1];
        t.lower[i + 1] = upper[i];
    }
    return t;
}

Tridiagonal Tridiagonal::scaled(cd s) const {
    Tridiagonal t = *this;
    for (auto* v : {&t.lower, &t.diag, &t.upper}) {
        for (auto& x : *v) x *= s;
    }
    return t;
}

namespace {

void check_input(const Tridiagonal& M, double d) {
    if (M.size() > kMaxExpmDimension) {
        throw DomainError("matrix exponential: dimension " + std::to_string(M.size()) + " exceeds " +
                          std::to_string(kMaxExpmDimension));
    }
    if (!std::isfinite(d)) throw DomainError("matrix exponential: non-finite length");
    for (const auto* v : {&M.lower, &M.diag, &M.upper}) {
        for (const auto& x : *v) {
            if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
                throw DomainError("matrix exponential: non-finite generator entry");
            }
        }
    }
    const double norm = M.norm1() * std::abs(d);
    if (norm > kMaxExpmNorm) {
        throw OverflowRisk("matrix exponential: ||M d||_1 = " + std::to_string(norm) + " exceeds " +
                           std::to_string(kMaxExpmNorm));
    }
}

// Pade approximants r_m of exp, Higham (2005) "The scaling and squaring
// method for the matrix exponential revisited", Table 2.3 / Algorithm 2.3.
constexpr std::array<double, 4> kB3 = {120., 60., 12., 1.};
constexpr std::array<double, 6> kB5 = {30240., 15120., 3360., 420., 30., 1.};
constexpr std::array<double, 8> kB7 = {17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.};
constexpr std::array<double, 10> kB9 = {17643225600., 8821612800., 2075673600., 302702400., 30270240.,
                                        2162160.,     110880.,     3960.,       90.,        1.};
constexpr std::array<double, 14> kB13 = {
    64764752532480000., 32382376266240000., 7771770303897600., 1187353796428800., 129060195264000.,
    10559470521600.,    670442572800.,      33522128640.,      1323241920.,       40840800.,
    960960.,            16380.,             182.,              1.};
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

template <std::size_t N>
Eigen::MatrixXcd pade_low(const Eigen::MatrixXcd& A, const std::array<double, N>& b) {
    const auto n = A.rows();
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
    const Eigen::MatrixXcd A2 = A * A;
    Eigen::MatrixXcd Apow = I;
    Eigen::MatrixXcd U_inner = Eigen::MatrixXcd::Zero(n, n);
    Eigen::MatrixXcd V = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t k = 0; k + 1 < N; k += 2) {
        V += b[k] * Apow;
        U_inner += b[k + 1] * Apow;
        Apow = Apow * A2;
    }
    const Eigen::MatrixXcd U = A * U_inner;
    return (V - U).partialPivLu().solve(V + U);
}

Eigen::MatrixXcd pade13(const Eigen::MatrixXcd& A) {
    const auto n = A.rows();
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
    const Eigen::MatrixXcd A2 = A * A;
    const Eigen::MatrixXcd A4 = A2 * A2;
    const Eigen::MatrixXcd A6 = A4 * A2;
    const auto& b = kB13;
    const Eigen::MatrixXcd U =
        A * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I);
    const Eigen::MatrixXcd V =
        A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
    return (V - U).partialPivLu().solve(V + U);
}

Eigen::MatrixXcd expm_pade(const Tridiagonal& M, double d) {
    Eigen::MatrixXcd A = M.dense() * d;
    const double norm = M.norm1() * std::abs(d);
    if (norm <= kTheta3) return pade_low(A, kB3);
    if (norm <= kTheta5) return pade_low(A, kB5);
    if (norm <= kTheta7) return pade_low(A, kB7);
    if (norm <= kTheta9) return pade_low(A, kB9);
    const int s = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
    A /= std::ldexp(1.0, s);
    Eigen::MatrixXcd X = pade13(A);
    for (int k = 0; k < s; ++k) X = X * X;
    return X;
}

using State = std::vector<cd>;

Eigen::MatrixXcd expm_ode(const Tridiagonal& M, double d, double rtol) {
    namespace odeint = boost::numeric::odeint;
    const std::size_t n = M.size();
    Eigen::MatrixXcd out(n, n);
    const auto& k = simd::kernels();
    const simd::TridiagView view{M.lower.data(), M.diag.data(), M.upper.data(), n};
    auto rhs = [&](const State& y, State& dy, double) {
        dy.resize(n);
        k.tridiag_matvec(view, y.data(), dy.data(), 1.0);
    };
    auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(rtol * 1e-3, rtol);
    const double h0 = 0.1 / std::max(1.0, M.norm1());
    for (std::size_t j = 0; j < n; ++j) {
        State y(n, cd{0.0, 0.0});
        y[j] = 1.0;
        if (d != 0.0) odeint::integrate_adaptive(stepper, rhs, y, 0.0, d, std::copysign(h0, d));
        for (std::size_t i = 0; i < n; ++i) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = y[i];
    }
    return out;
}

}  // namespace

Eigen::MatrixXcd matrix_exponential_tridiag(const Tridiagonal& M, double d, const ExpmOptions& opts) {
    check_input(M, d);
    if (M.size() == 0) return {};
    Eigen::MatrixXcd primary = opts.method == ExpmMethod::PadeScalingSquaring ? expm_pade(M, d)
                                                                              : expm_ode(M, d, opts.ode_rtol);
    if (opts.self_check) {
        const Eigen::MatrixXcd other = opts.method == ExpmMethod::PadeScalingSquaring
                                           ? expm_ode(M, d, opts.ode_rtol)
                                           : expm_pade(M, d);
        const double diff = (primary - other).cwiseAbs().maxCoeff();
        const double scale = std::max(1.0, primary.cwiseAbs().maxCoeff());
        if (diff > opts.check_tol * scale) {
            throw NoConvergence("matrix exponential self-check: methods differ by " + std::to_string(diff), diff);
        }
    }
    return primary;
}

namespace {

// Taylor-degree thresholds theta_m for unit roundoff 2^-53 (Al-Mohy &
// Higham 2011, Table 3.1 and Higham's "Functions of Matrices", Table A.3).
constexpr std::array<std::pair<int, double>, 35> kTaylorTheta = {{
    {1, 2.29e-16}, {2, 2.58e-8}, {3, 1.39e-5}, {4, 3.40e-4}, {5, 2.40e-3}, {6, 9.07e-3},
    {7, 2.38e-2},  {8, 5.00e-2}, {9, 8.96e-2}, {10, 1.44e-1}, {11, 2.14e-1}, {12, 3.00e-1},
    {13, 4.00e-1}, {14, 5.14e-1}, {15, 6.41e-1}, {16, 7.81e-1}, {17, 9.31e-1}, {18, 1.09},
    {19, 1.26},    {20, 1.44},   {21, 1.62},   {22, 1.82},   {23, 2.01},   {24, 2.22},
    {25, 2.43},    {26, 2.64},   {27, 2.86},   {28, 3.08},   {29, 3.31},   {30, 3.54},
    {35, 4.7},     {40, 6.0},    {45, 7.2},    {50, 8.5},    {55, 9.9},
}};

}  // namespace

std::vector<cd> expm_action(const Tridiagonal& M, double d, std::span<const cd> v) {
    const std::size_t n = M.size();
    if (v.size() != n) throw DomainError("expm_action: vector length does not match generator");
    if (n > 0) {
        for (const auto& x : v) {
            if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) throw DomainError("expm_action: non-finite input");
        }
    }
    std::vector<cd> F(v.begin(), v.end());
    if (n == 0 || d == 0.0) return F;

    cd trace{0.0, 0.0};
    for (const auto& x : M.diag) trace += x;
    const cd mu = trace / static_cast<double>(n);
    Tridiagonal A = M;
    for (auto& x : A.diag) x -= mu;
    check_input(A, d);
    const double norm = A.norm1() * std::abs(d);

    if (norm == 0.0) {
        const cd eta = std::exp(mu * d);
        for (auto& x : F) x *= eta;
        return F;
    }

    int best_m = 0;
    long long best_s = 0;
    long long best_cost = std::numeric_limits<long long>::max();
    for (const auto& [m, theta] : kTaylorTheta) {
        const auto s = static_cast<long long>(std::ceil(norm / theta));
        if (s <= 0) continue;
        const long long cost = static_cast<long long>(m) * s;
        if (cost < best_cost) {
            best_cost = cost;
            best_m = m;
            best_s = s;
        }
    }

    const auto& kern = simd::kernels();
    const simd::TridiagView view{A.lower.data(), A.diag.data(), A.upper.data(), n};
    const double tol = std::ldexp(1.0, -53);
    const cd eta = std::exp(mu * d / static_cast<double>(best_s));
    std::vector<cd> b = F;
    std::vector<cd> next(n);

    for (long long i = 0; i < best_s; ++i) {
        double c1 = 0.0;
        for (const auto& x : b) c1 = std::max(c1, std::abs(x));
        double normF = c1;
        for (int k = 1; k <= best_m; ++k) {
            const double scale = d / (static_cast<double>(best_s) * k);
            const double c2 = kern.tridiag_matvec(view, b.data(), next.data(), scale);
            std::swap(b, next);
            normF = kern.accumulate(b.data(), F.data(), n);
            if (c1 + c2 <= tol * normF) break;
            c1 = c2;
        }
        kern.scale(F.data(), eta, n);
        b = F;
    }
    return F;
}

}  // namespace translume::numerics
