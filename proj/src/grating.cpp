#include "translume/grating.hpp"

#include "translume/errors.hpp"
#include "translume/numerics.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace translume {

namespace {

void require(bool ok, const char* field, const std::string& rule) {
    if (!ok) throw ConfigError(std::string(field) + ": " + rule);
}

}  // namespace

void GratingConfig::validate() const {
    for (auto [name, v] : {std::pair{"eps_b", eps_b}, {"alpha", alpha}, {"g", g}, {"Omega", Omega},
                           {"d", d}, {"c0", c0}, {"hbar", hbar}, {"kB", kB}}) {
        require(std::isfinite(v), name, "must be finite");
    }
    require(alpha >= 0.0, "alpha", "must be >= 0");
    require(eps_b - 2.0 * alpha > 0.0, "alpha", "must be < eps_b / 2");
    require(g > 0.0, "g", "must be > 0");
    require(Omega >= 0.0, "Omega", "must be >= 0");
    require(d >= 0.0, "d", "must be >= 0");
    require(c0 > 0.0, "c0", "must be > 0");
    require(hbar > 0.0, "hbar", "must be > 0");
    require(kB > 0.0, "kB", "must be > 0");
}

bool GratingConfig::transluminal() const {
    const double cg = grating_speed();
    return min_speed() < cg && cg < max_speed();
}

const char* to_string(HorizonKind kind) {
    return kind == HorizonKind::Accumulation ? "accumulation" : "dispersal";
}

double refractive_profile(const GratingConfig& cfg, double X) {
    return cfg.eps_b + 2.0 * cfg.alpha * std::cos(cfg.g * X);
}

double local_speed(const GratingConfig& cfg, double X) { return cfg.c0 / refractive_profile(cfg, X); }

double local_speed_slope(const GratingConfig& cfg, double X) {
    const double eps = refractive_profile(cfg, X);
    return cfg.c0 * 2.0 * cfg.alpha * cfg.g * std::sin(cfg.g * X) / (eps * eps);
}

ComovingParams comoving_params(const GratingConfig& cfg, double X) {
    const double eps = refractive_profile(cfg, X);
    const double c = cfg.c0 / eps;
    const double cg = cfg.grating_speed();
    const double denom = 1.0 - (cg * cg) / (c * c);
    if (std::abs(denom) < kPoleTolerance) throw HorizonSingularity(X);
    return {eps / denom, eps / denom, -eps * eps * (cg / cfg.c0) / denom};
}

HorizonSet find_horizons(const GratingConfig& cfg) {
    cfg.validate();
    if (!cfg.transluminal()) {
        throw NotTransluminal("grating speed " + std::to_string(cfg.grating_speed()) + " outside the open range (" +
                              std::to_string(cfg.min_speed()) + ", " + std::to_string(cfg.max_speed()) + ")");
    }
    const double cg = cfg.grating_speed();
    const double half = std::numbers::pi / cfg.g;
    auto h = [&](double X) { return local_speed(cfg, X) - cg; };
    const double tol = kRootTolerance * cfg.c0;
    // c(X) rises on (0, pi/g) and falls on (pi/g, 2pi/g): one root in each.
    HorizonSet out;
    for (double lo : {0.0, half}) {
        const double X = numerics::find_root_bracketed(h, lo, lo + half, tol, 0.0);
        const double slope = local_speed_slope(cfg, X);
        out.push_back({X, slope > 0.0 ? HorizonKind::Dispersal : HorizonKind::Accumulation, slope});
    }
    return out;
}

RayTrajectory trace_ray(const GratingConfig& cfg, double x0, double t0, double t_end, const RayOptions& opts) {
    namespace odeint = boost::numeric::odeint;
    cfg.validate();
    if (!(t_end > t0)) throw DomainError("trace_ray: t_end must exceed t0");
    const double cg = cfg.grating_speed();
    const double period = cfg.period();
    const double X0 = x0 - cg * t0;

    RayTrajectory traj;
    traj.samples.push_back({t0, x0, X0});

    auto velocity = [&](double X) { return local_speed(cfg, X) - cg; };
    const double v0 = velocity(X0);
    const double dir = v0 > 0.0 ? 1.0 : (v0 < 0.0 ? -1.0 : 0.0);
    if (dir == 0.0) {
        traj.samples.push_back({t_end, X0 + cg * t_end, X0});
        return traj;
    }

    // The first horizon ahead of X0 bounds the whole trajectory.
    double barrier = dir * std::numeric_limits<double>::infinity();
    if (cfg.transluminal()) {
        for (const auto& hz : find_horizons(cfg)) {
            const double k = dir > 0 ? std::ceil((X0 - hz.X) / period) : std::floor((X0 - hz.X) / period);
            double cand = hz.X + k * period;
            if (cand == X0) cand += dir * period;  // X0 differs from the root only by rounding
            if (dir * (cand - barrier) < 0.0) barrier = cand;
        }
    }

    using State = std::array<double, 1>;
    auto rhs = [&](const State& s, State& ds, double) { ds[0] = velocity(s[0]); };
    const double atol = opts.atol > 0.0 ? opts.atol : 1e-12 * period;
    auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(atol, opts.rtol);
    const double min_step = kStallFraction * period;

    double t = t0;
    State s{X0};
    double dt = opts.initial_step > 0.0 ? opts.initial_step : 1e-2 * period / std::max(std::abs(v0), 1e-3 * cfg.c0);
    for (std::size_t step = 0; step < opts.max_steps && t < t_end; ++step) {
        dt = std::min(dt, t_end - t);
        if (dt < min_step && t_end - t > min_step) {
            traj.stalled = true;
            break;
        }
        State trial = s;
        double t_trial = t;
        double dt_trial = dt;
        const auto res = stepper.try_step(rhs, trial, t_trial, dt_trial);
        if (res == odeint::controlled_step_result::fail) {
            dt = dt_trial;
            continue;
        }
        if (!(dir * (barrier - trial[0]) > 0.0)) {
            dt *= 0.5;
            continue;
        }
        s = trial;
        // The last step is clamped so t lands on t_end exactly.
        t = (t_end - t_trial) <= 1e-15 * std::abs(t_end) ? t_end : t_trial;
        dt = dt_trial;
        traj.samples.push_back({t, s[0] + cg * t, s[0]});
    }
    if (!traj.stalled && t < t_end) {
        throw NoConvergence("trace_ray: step budget exhausted before t_end", t);
    }
    return traj;
}

}  // namespace translume
