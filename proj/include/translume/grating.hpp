#pragma once

// Transluminal cosine grating eps(gx - Omega t) = mu(gx - Omega t)
//   = eps_b + 2 alpha cos(gx - Omega t)
// and its ray picture. Everything here is expressed in the co-moving
// coordinate X = x - c_g t, in which the grating is stationary and the
// characteristics obey the autonomous equation dX/dt = c(X) - c_g.

#include <numbers>
#include <vector>

namespace translume {

struct GratingConfig {
    double eps_b = 1.0;
    double alpha = 0.05;
    double g = 1.0;
    double Omega = 1.0;
    double d = 0.0;
    double c0 = 1.0;
    double hbar = 1.0;
    double kB = 1.0;

    /// Throws ConfigError naming the offending field.
    void validate() const;

    [[nodiscard]] double grating_speed() const { return Omega / g; }
    [[nodiscard]] double period() const { return 2.0 * std::numbers::pi / g; }
    [[nodiscard]] double min_speed() const { return c0 / (eps_b + 2.0 * alpha); }
    [[nodiscard]] double max_speed() const { return c0 / (eps_b - 2.0 * alpha); }

    /// Strict inequality: a grating speed equal to an extremum of c(X)
    /// (tangential root) does not count.
    [[nodiscard]] bool transluminal() const;

    friend bool operator==(const GratingConfig&, const GratingConfig&) = default;
};

enum class HorizonKind {
    Accumulation,  // dc/dX < 0, rays converge (white-hole-like)
    Dispersal,     // dc/dX > 0, rays recede (black-hole-like)
};

const char* to_string(HorizonKind kind);

struct Horizon {
    double X;     // in [0, period)
    HorizonKind kind;
    double dcdX;  // slope of the local speed at X
};

using HorizonSet = std::vector<Horizon>;

struct ComovingParams {
    double eps;
    double mu;
    double xi;  // magneto-electric coupling
};

struct RaySample {
    double t;
    double x;  // lab position
    double X;  // unwrapped co-moving position, X = x - c_g t
};

struct RayTrajectory {
    std::vector<RaySample> samples;
    bool stalled = false;  // integrator step fell below the underflow floor
};

struct RayOptions {
    double rtol = 1e-10;
    double atol = 0.0;        // 0 selects 1e-12 * period
    double initial_step = 0;  // 0 selects an automatic guess
    std::size_t max_steps = 1'000'000;
};

inline constexpr double kRootTolerance = 1e-12;  // times c0
inline constexpr double kPoleTolerance = 1e-9;
inline constexpr double kStallFraction = 1e-14;  // times period

[[nodiscard]] double refractive_profile(const GratingConfig& cfg, double X);
[[nodiscard]] double local_speed(const GratingConfig& cfg, double X);
[[nodiscard]] double local_speed_slope(const GratingConfig& cfg, double X);

/// Galilean co-moving constitutive parameters. Throws HorizonSingularity
/// when |1 - c_g^2/c^2(X)| < kPoleTolerance.
[[nodiscard]] ComovingParams comoving_params(const GratingConfig& cfg, double X);

/// Roots of c(X) = c_g on one period. Throws NotTransluminal.
[[nodiscard]] HorizonSet find_horizons(const GratingConfig& cfg);

/// Integrates dX/dt = c(X) - c_g from lab position x0 at t0 to t_end with an
/// adaptive Dormand-Prince 5(4) pair. Steps that would carry X across a
/// horizon are rejected and retried with a smaller step, so the unwrapped X
/// never crosses a root of c(X) = c_g. A stall (step below
/// kStallFraction * period) ends the trajectory early with `stalled` set.
[[nodiscard]] RayTrajectory trace_ray(const GratingConfig& cfg, double x0, double t0, double t_end,
                                      const RayOptions& opts = {});

}  // namespace translume
