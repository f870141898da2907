#pragma once

// Observables built on the transmission ladder and the pulse model: the
// vacuum emission density per grating period, its effective temperature,
// stimulated conversion into negative-frequency rungs, and photon-number
// bookkeeping with signed frequencies.

#include "translume/floquet.hpp"
#include "translume/grating.hpp"

#include <limits>
#include <span>
#include <string>
#include <vector>

namespace translume {

/// count points at (k + 1/2) * span * Omega / count, k = 0 .. count-1. The
/// half-step offset keeps every point off the multiples of Omega.
[[nodiscard]] std::vector<double> default_grid(double Omega, int count = 512, double span = 3.0);
/// points_per_lobe midpoints in each interval [m Omega, (m+1) Omega) for
/// m = m_lo .. m_hi - 1.
[[nodiscard]] std::vector<double> lobe_grid(double Omega, int m_lo, int m_hi, int points_per_lobe);

struct RungContribution {
    int n;             // input rung, omega_n = omega_bar + n Omega < 0
    double density;    // 2 (|omega_n| / omega) |t|^2
};

struct EmissionPoint {
    double omega;
    double density;
    int N_max;  // truncation that met the convergence test
    std::vector<RungContribution> breakdown;
};

struct EmissionSpectrum {
    GratingConfig cfg;
    std::vector<EmissionPoint> points;
    double energy_per_period = 0.0;  // sum of hbar omega N(omega) d omega over the grid

    [[nodiscard]] std::vector<double> omega() const;
    [[nodiscard]] std::vector<double> density() const;
};

/// N(omega) = 2 sum_{omega_n < 0} (|omega_n| / omega) |t(omega <- omega_n)|^2,
/// one ladder row per grid point. Auto truncation accepts N_max once the
/// negative-frequency boundary rungs stay below kLeakageTol and N(omega) is
/// unchanged to 1e-9 (relative, 1e-14 absolute floor) from N_max / 2. Grid
/// points are split over `workers` threads; results do not depend on the split.
[[nodiscard]] EmissionSpectrum vacuum_spectrum(const GratingConfig& cfg, std::span<const double> grid,
                                               Truncation trunc = Truncation::auto_(), int workers = 1);

struct ThermalFitOptions {
    double omega_min = 0.0;
    double omega_max = std::numeric_limits<double>::infinity();
};

struct ThermalFit {
    double temperature;
    double residual;  // rms of log(omega N) about the fitted line
    double intercept;
    std::vector<double> peak_omega;
    std::vector<double> peak_density;
};

/// Least squares log(omega N) = c - hbar omega / (kB T) through the lobe
/// maxima (parabolically refined) inside the window. Throws
/// InsufficientPeaks below 3 maxima.
[[nodiscard]] ThermalFit thermal_fit(const EmissionSpectrum& spectrum, const ThermalFitOptions& opts = {});
[[nodiscard]] ThermalFit thermal_fit(std::span<const double> omega, std::span<const double> density, double hbar,
                                     double kB, const ThermalFitOptions& opts = {});

enum class Engine { Analytic, Floquet };

const char* to_string(Engine e);
/// Throws ConfigError for anything but "analytic" or "floquet".
Engine parse_engine(const std::string& s);

struct RungFraction {
    int n_prime;
    double omega;     // signed output frequency
    double fraction;  // power fraction relative to unit input
};

struct StimulatedResult {
    Engine engine;
    double k_tilde;
    int n;
    double omega_in;
    std::vector<RungFraction> rungs;
    double total = 0.0;
    int N_max = 0;  // Floquet truncation, 0 for the analytic engine
};

inline constexpr double kStimulatedTailTol = 1e-6;
inline constexpr int kStimulatedTailRun = 20;

/// Fractions of unit input power reaching each negative rung: |F|^2 from the
/// pulse model or |t_{n'n}|^2 from the ladder column. The sum stops after 20
/// consecutive rungs below 1e-6 of the running total. The input wave
/// k~ + n g enters the ladder at omega_in = c0 (k~ + n g) / eps_b.
[[nodiscard]] StimulatedResult stimulated_fractions(const GratingConfig& cfg, double k_tilde, int n, Engine engine);

struct AliasSignature {
    double positive_alias;  // omega mod Omega
    double negative_alias;  // Omega - positive_alias
    bool degenerate;        // omega is a multiple of Omega / 2
};

[[nodiscard]] AliasSignature alias_signature(double omega_probe, double Omega);

struct FluxEntry {
    double omega;  // signed, nonzero
    double flux;   // energy per unit time, >= 0
};

struct FluxSpectrum {
    std::vector<FluxEntry> entries;
    double hbar = 1.0;
};

struct PhotonCounts {
    double N;
    double N_tilde;
    double pairs;  // (N - N_tilde) / 2
};

[[nodiscard]] PhotonCounts photon_counts(const FluxSpectrum& flux);

/// Output fluxes of a ladder column driven by one pseudo-photon per unit
/// time at the input rung (flux hbar |omega_in|).
[[nodiscard]] FluxSpectrum transmitted_flux(const RungVector& column, double hbar);

}  // namespace translume
