#include "translume/pulse.hpp"

#include "translume/errors.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <string>

namespace translume {

using numerics::DecayHint;
using numerics::QuadratureOptions;
using std::numbers::pi;

double gamma(const GratingConfig& cfg) { return std::exp(-2.0 * cfg.alpha * cfg.g * cfg.d); }

PulseModel PulseModel::from(const GratingConfig& cfg) {
    cfg.validate();
    const double gm = translume::gamma(cfg);
    return {cfg, gm, gm < kLongGratingGamma};
}

PhaseMap phase_map(const PulseModel& model, double x) {
    const double g = model.cfg.g;
    const double gm = model.gamma;
    const double xg = x * g;
    return {pi + 2.0 * std::atan(xg / (2.0 * gm)), 4.0 * gm / (xg * xg + 4.0 * gm * gm)};
}

double sin_pi(double q) {
    const double r = std::round(q);
    const double s = std::sin(pi * (q - r));
    return std::fmod(r, 2.0) == 0.0 ? s : -s;
}

double sinc_pi(double q) { return q == 0.0 ? 1.0 : sin_pi(q) / (pi * q); }

namespace {

cd exp_i_pi(double q) {
    const double r = std::round(q);
    const double sign = std::fmod(r, 2.0) == 0.0 ? 1.0 : -1.0;
    const double t = pi * (q - r);
    return {sign * std::cos(t), sign * std::sin(t)};
}

void check_rungs(const PulseModel& model, double k_tilde, int n, int n_prime) {
    const double g = model.cfg.g;
    if (!(k_tilde >= 0.0 && k_tilde < g)) {
        throw DomainError("k_tilde = " + std::to_string(k_tilde) + " outside [0, g)");
    }
    if (!(k_tilde + n * g > 0.0)) throw DomainError("input rung n = " + std::to_string(n) + " is not positive");
    if (!(k_tilde + n_prime * g < 0.0)) {
        throw DomainError("output rung n' = " + std::to_string(n_prime) + " is not negative");
    }
}

}  // namespace

SpectralAmplitude spectral_amplitude(const PulseModel& model, double k_tilde, int n, int n_prime,
                                     const QuadratureOptions& opts) {
    check_rungs(model, k_tilde, n, n_prime);
    const double g = model.cfg.g;
    const double q = k_tilde / g + n;
    const double ap = -(k_tilde + n_prime * g);
    SpectralAmplitude out{k_tilde, n, n_prime, {0.0, 0.0}, 0.0};
    const double s = sinc_pi(q);
    if (s == 0.0) return out;

    const double beta = 4.0 * model.gamma * ap / g;
    const numerics::RealIntegrand integrand = [&](double t) { return t <= 0.0 ? 0.0 : std::exp(-t + q * std::log(t / (t + beta))); };
    QuadratureOptions o = opts;
    // The integral is O(beta^-q) for large beta; only the relative tolerance should bind.
    o.abs_tol = std::min(o.abs_tol, 1e-300);
    const auto K = numerics::integrate_semi_infinite(integrand, 0.0, DecayHint::exponential(1.0), o);
    const double scale = s * std::exp(-2.0 * model.gamma * ap / g) / g;
    out.value = exp_i_pi(q) * (scale * K.value);
    out.abs_error_estimate = std::abs(scale) * K.abs_error_estimate;
    return out;
}

double asymptotic_amplitude(const PulseModel& model, double k_tilde, int n, int n_prime) {
    const double g = model.cfg.g;
    const double s = sinc_pi(k_tilde / g + n);
    return 4.0 * s * s * std::exp((k_tilde / g + n_prime) * 4.0 * model.gamma);
}

bool in_asymptotic_regime(const PulseModel& model, double k_tilde, int n_prime) {
    return std::abs(k_tilde / model.cfg.g + n_prime) * 4.0 * model.gamma >= kAsymptoticThreshold;
}

HawkingTemperature hawking_temperature(const GratingConfig& cfg) {
    const double gain = std::exp(2.0 * cfg.alpha * cfg.g * cfg.d);
    const double a = cfg.hbar * cfg.g * cfg.c0 / (4.0 * cfg.kB) * gain;
    const double b = cfg.hbar * cfg.Omega / (4.0 * cfg.kB) * gain;
    return {a, b, std::abs(a - b) > 1e-12 * std::max(std::abs(a), std::abs(b))};
}

int first_negative_rung(double k_tilde, double g) {
    auto m = static_cast<int>(std::floor(-k_tilde / g));
    while (k_tilde + m * g >= 0.0) --m;
    while (k_tilde + (m + 1) * g < 0.0) ++m;
    return m;
}

namespace {

double pair_prefactor(const PulseModel& model, double q) {
    const double s = sin_pi(q);
    return 4.0 * s * s / (model.cfg.hbar * model.cfg.c0 * model.cfg.g * q * q);
}

// Double integral on [2, Z]^2 in the variables z = 1 + e^u, which spreads
// the (z - 2)^q endpoint behaviour and the algebraic tail evenly over u.
double pair_integral(double q, double Z) {
    const double umax = std::log(Z - 1.0);
    const QuadratureOptions o{1e-10, 1e-300, 10'000'000};
    auto base = [q](double z) { return std::exp(q * std::log((z - 2.0) / (z + 2.0))); };
    const numerics::RealIntegrand outer = [&](double u1) {
        const double z1 = 1.0 + std::exp(u1);
        if (z1 <= 2.0) return 0.0;
        const double b1 = base(z1);
        const numerics::RealIntegrand inner = [&](double u2) {
            const double z2 = 1.0 + std::exp(u2);
            if (z2 <= 2.0) return 0.0;
            return b1 * base(z2) / ((z1 + z2) * (z1 + z2)) * (z2 - 1.0);
        };
        return numerics::integrate(inner, 0.0, umax, o).value * (z1 - 1.0);
    };
    return numerics::integrate(outer, 0.0, umax, o).value;
}

}  // namespace

double pair_number_truncated(const PulseModel& model, double k_tilde, int n, double Z) {
    const double q = k_tilde / model.cfg.g + n;
    if (!(q > 0.0)) throw DomainError("pair_number: incident rung must be positive");
    if (!(Z > 2.0)) throw DomainError("pair_number: cut-off must exceed 2");
    const double pref = pair_prefactor(model, q);
    if (pref == 0.0) return 0.0;
    return pref * pair_integral(q, Z);
}

double pair_number(const PulseModel& model, double k_tilde, int n) {
    const double q = k_tilde / model.cfg.g + n;
    if (!(q > 0.0)) throw DomainError("pair_number: incident rung must be positive");
    if (pair_prefactor(model, q) == 0.0) return 0.0;
    double Z = 64.0;
    double prev = pair_number_truncated(model, k_tilde, n, Z);
    double prev_increment = 0.0;
    for (int k = 0; k < 40; ++k) {
        Z *= 2.0;
        const double cur = pair_number_truncated(model, k_tilde, n, Z);
        const double inc = std::abs(cur - prev);
        if (inc <= 1e-10 * std::abs(cur)) return cur;
        if (k >= 3 && inc > 0.9 * prev_increment) {
            throw NoConvergence("pair_number: double integral does not converge (increment per cut-off doubling " +
                                    std::to_string(inc) + " at Z = " + std::to_string(Z) + ")",
                                cur);
        }
        prev_increment = inc;
        prev = cur;
    }
    throw NoConvergence("pair_number: cut-off limit reached", prev);
}

namespace {

constexpr int kTailRun = 20;
constexpr int kMaxRungs = 1'000'000;

ModeSum mode_sum(const PulseModel& model, double k_tilde, int n, double tail_tol,
                 const std::function<double(int, double)>& term) {
    ModeSum out;
    const double q = k_tilde / model.cfg.g + n;
    if (sinc_pi(q) == 0.0) {
        check_rungs(model, k_tilde, n, first_negative_rung(k_tilde, model.cfg.g));
        return out;
    }
    int quiet = 0;
    for (int np = first_negative_rung(k_tilde, model.cfg.g); out.terms < kMaxRungs; --np) {
        const double F2 = std::norm(spectral_amplitude(model, k_tilde, n, np).value);
        const double v = term(np, F2);
        out.total += v;
        ++out.terms;
        quiet = v < tail_tol * out.total ? quiet + 1 : 0;
        if (quiet >= kTailRun) return out;
    }
    throw NoConvergence("mode sum did not reach its tail criterion", out.total);
}

}  // namespace

ModeSum pair_number_mode_sum(const PulseModel& model, double k_tilde, int n) {
    const auto& c = model.cfg;
    return mode_sum(model, k_tilde, n, 1e-10, [&](int np, double F2) {
        return F2 / (c.hbar * c.c0 * std::abs(k_tilde + np * c.g));
    });
}

double intensity_sum(const PulseModel& model, double k_tilde, int n) {
    const auto& c = model.cfg;
    const double q = k_tilde / c.g + n;
    const double s = sin_pi(q);
    return s * s * std::exp(2.0 * c.alpha * c.g * c.d) / (q * q * c.g);
}

ModeSum intensity_mode_sum(const PulseModel& model, double k_tilde, int n) {
    return mode_sum(model, k_tilde, n, 1e-10, [](int, double F2) { return F2; });
}

}  // namespace translume
