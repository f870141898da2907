#pragma once

// Long-grating description of the transmitted field: a monochromatic input
// leaves as a train of Lorentzian pulses, one per period, whose Fourier
// coefficients couple a positive-frequency input rung to negative-frequency
// output rungs.
//
// Phase convention: f is the dimensionless phase accumulated across one
// pulse, f(x) = pi + 2 atan(x g / 2 gamma), so f(-inf) = 0, f(+inf) = 2 pi and
// df/dx = g f'(x). The input rung enters as exp(i q f) with q = k~/g + n.

#include "translume/grating.hpp"
#include "translume/numerics.hpp"

#include <complex>

namespace translume {

using cd = std::complex<double>;

/// gamma below this marks the long-grating regime in which the Lorentzian
/// pulse model is quantitatively meaningful.
inline constexpr double kLongGratingGamma = 0.05;
/// |k~/g + n'| * 4 gamma at or above which the large-|n'| asymptote applies.
inline constexpr double kAsymptoticThreshold = 8.0;

[[nodiscard]] double gamma(const GratingConfig& cfg);

struct PulseModel {
    GratingConfig cfg;
    double gamma = 1.0;
    bool long_grating = false;

    static PulseModel from(const GratingConfig& cfg);
};

struct PhaseMap {
    double f;
    double f_prime;
};

[[nodiscard]] PhaseMap phase_map(const PulseModel& model, double x);

/// sin(pi q) with exact zeros at integer q.
[[nodiscard]] double sin_pi(double q);
/// sin(pi q) / (pi q), 1 at q = 0.
[[nodiscard]] double sinc_pi(double q);

struct SpectralAmplitude {
    double k_tilde;
    int n;
    int n_prime;
    cd value;
    double abs_error_estimate;
};

/// Closed semi-infinite form of the Fourier coefficient,
///   F = e^{i pi q} sinc(pi q) e^{-2 gamma |p| / g} / g
///       * int_0^inf e^{-t} (t / (t + 4 gamma |p| / g))^q dt,
/// with p = k~ + n' g < 0. Throws DomainError unless k~ in [0, g),
/// k~ + n g > 0 and k~ + n' g < 0.
[[nodiscard]] SpectralAmplitude spectral_amplitude(const PulseModel& model, double k_tilde, int n, int n_prime,
                                                   const numerics::QuadratureOptions& opts = {});

/// Large-|n'| form 4 sinc^2(pi q) e^{4 gamma (k~/g + n')}.
[[nodiscard]] double asymptotic_amplitude(const PulseModel& model, double k_tilde, int n, int n_prime);
[[nodiscard]] bool in_asymptotic_regime(const PulseModel& model, double k_tilde, int n_prime);

struct HawkingTemperature {
    double from_g;      // hbar g c0 / (4 kB) e^{2 alpha g d}
    double from_Omega;  // hbar Omega / (4 kB) e^{2 alpha g d}
    bool forms_differ;  // c_g != c0
};

[[nodiscard]] HawkingTemperature hawking_temperature(const GratingConfig& cfg);

/// Largest n' with k~ + n' g < 0.
[[nodiscard]] int first_negative_rung(double k_tilde, double g);

/// Photon pairs per incident mode from the double integral over [2, inf)^2.
/// The integrand falls off only as (z' + z'')^-2, so the square cut-off Z is
/// doubled until the increments fall below 1e-10 of the value; if they stop
/// shrinking the integral is declared divergent and NoConvergence carries
/// the last truncated value.
[[nodiscard]] double pair_number(const PulseModel& model, double k_tilde, int n);
/// The same double integral on [2, Z]^2.
[[nodiscard]] double pair_number_truncated(const PulseModel& model, double k_tilde, int n, double Z);

struct ModeSum {
    double total = 0.0;
    int terms = 0;
};

/// sum over negative rungs of |F|^2 / (hbar c0 |k~ + n' g|).
[[nodiscard]] ModeSum pair_number_mode_sum(const PulseModel& model, double k_tilde, int n);

/// sin^2(pi q) e^{2 alpha g d} / (q^2 g).
[[nodiscard]] double intensity_sum(const PulseModel& model, double k_tilde, int n);
/// sum over negative rungs of |F|^2.
[[nodiscard]] ModeSum intensity_mode_sum(const PulseModel& model, double k_tilde, int n);

}  // namespace translume
