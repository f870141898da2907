#include "translume/emission.hpp"

#include "translume/errors.hpp"
#include "translume/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <thread>

namespace translume {

std::vector<double> default_grid(double Omega, int count, double span) {
    if (count < 1 || !(span > 0.0) || !(Omega > 0.0)) throw DomainError("default_grid: bad arguments");
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) out[static_cast<std::size_t>(k)] = (k + 0.5) * span * Omega / count;
    return out;
}

std::vector<double> lobe_grid(double Omega, int m_lo, int m_hi, int points_per_lobe) {
    if (m_lo < 0 || m_hi <= m_lo || points_per_lobe < 1 || !(Omega > 0.0)) {
        throw DomainError("lobe_grid: bad arguments");
    }
    std::vector<double> out;
    for (int m = m_lo; m < m_hi; ++m) {
        for (int k = 0; k < points_per_lobe; ++k) out.push_back((m + (k + 0.5) / points_per_lobe) * Omega);
    }
    return out;
}

std::vector<double> EmissionSpectrum::omega() const {
    std::vector<double> out;
    for (const auto& p : points) out.push_back(p.omega);
    return out;
}

std::vector<double> EmissionSpectrum::density() const {
    std::vector<double> out;
    for (const auto& p : points) out.push_back(p.density);
    return out;
}

namespace {

EmissionPoint density_from_row(const RungVector& row, double omega) {
    EmissionPoint p{omega, 0.0, row.N_max, {}};
    const int inner = row.N_max - boundary_margin(row.N_max);
    for (int n = -inner; n <= inner; ++n) {
        const double wn = row.omega(n);
        if (!(wn < 0.0)) continue;
        const double c = 2.0 * (-wn / omega) * std::norm(row.at(n));
        p.density += c;
        p.breakdown.push_back({n, c});
    }
    // Keep the breakdown to the rungs that matter.
    const double floor = 1e-12 * p.density;
    std::erase_if(p.breakdown, [&](const RungContribution& r) { return r.density <= floor; });
    return p;
}

// Only the negative-frequency half of the row enters the density; the
// positive half of a high output rung can spread far beyond it.
double negative_leakage(const RungVector& row) {
    const int inner = row.N_max - boundary_margin(row.N_max);
    double m = 0.0;
    for (int n = -row.N_max; n < -inner; ++n) m = std::max(m, std::abs(row.at(n)));
    return m;
}

EmissionPoint emission_point(const GratingConfig& cfg, double omega, Truncation trunc) {
    if (!(omega > 0.0)) throw DomainError("vacuum_spectrum: grid frequencies must be positive");
    const double m = std::floor(omega / cfg.Omega);
    const double base = omega - m * cfg.Omega;
    const int rung = static_cast<int>(m);
    if (!trunc.automatic) return density_from_row(transmission_row(cfg, base, rung, trunc), omega);

    // Walk the same N_max ladder as the row solver, keeping the previous
    // density so that the doubling comparison costs no extra row.
    int N = kAutoStartRungs;
    while (std::abs(rung) > N - boundary_margin(N)) N *= 2;
    std::optional<EmissionPoint> prev;
    for (; N <= kMaxRungs; N *= 2) {
        const auto row = transmission_row(cfg, base, rung, Truncation::fixed(N));
        auto p = density_from_row(row, omega);
        if (negative_leakage(row) < kLeakageTol && prev &&
            std::abs(p.density - prev->density) <= 1e-9 * p.density + 1e-14) {
            return p;
        }
        prev = std::move(p);
    }
    throw NoConvergence("vacuum_spectrum: density at omega = " + std::to_string(omega) +
                            " not converged at N_max = " + std::to_string(kMaxRungs),
                        prev ? prev->density : 0.0);
}

}  // namespace

EmissionSpectrum vacuum_spectrum(const GratingConfig& cfg, std::span<const double> grid, Truncation trunc,
                                 int workers) {
    cfg.validate();
    if (!(cfg.Omega > 0.0)) throw DomainError("vacuum_spectrum: Omega must be > 0");
    EmissionSpectrum out;
    out.cfg = cfg;
    out.points.resize(grid.size());

    const auto count = grid.size();
    const auto nthreads = static_cast<std::size_t>(std::clamp<long>(workers, 1, std::max<long>(1, static_cast<long>(count))));
    std::vector<std::exception_ptr> errors(nthreads);
    auto work = [&](std::size_t w) {
        try {
            for (std::size_t i = w; i < count; i += nthreads) out.points[i] = emission_point(cfg, grid[i], trunc);
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (nthreads == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < nthreads; ++w) pool.emplace_back(work, w);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    // Each point stands for the interval reaching halfway to its neighbours.
    for (std::size_t i = 0; i < count; ++i) {
        double lo;
        double hi;
        if (count == 1) {
            lo = hi = 0.0;
        } else if (i == 0) {
            hi = 0.5 * (grid[1] - grid[0]);
            lo = hi;
        } else if (i + 1 == count) {
            lo = 0.5 * (grid[i] - grid[i - 1]);
            hi = lo;
        } else {
            lo = 0.5 * (grid[i] - grid[i - 1]);
            hi = 0.5 * (grid[i + 1] - grid[i]);
        }
        out.energy_per_period += cfg.hbar * grid[i] * out.points[i].density * (lo + hi);
    }
    return out;
}

ThermalFit thermal_fit(std::span<const double> omega, std::span<const double> density, double hbar, double kB,
                       const ThermalFitOptions& opts) {
    if (omega.size() != density.size()) throw DomainError("thermal_fit: size mismatch");
    ThermalFit fit{};
    // Maxima are located on omega N, the quantity being fitted.
    auto y = [&](std::size_t i) { return omega[i] * density[i]; };
    for (std::size_t i = 1; i + 1 < omega.size(); ++i) {
        const double y0 = y(i - 1);
        const double y1 = y(i);
        const double y2 = y(i + 1);
        if (!(y1 > y0 && y1 >= y2 && y1 > 0.0)) continue;
        if (omega[i] < opts.omega_min || omega[i] > opts.omega_max) continue;
        // Vertex of the parabola through the three samples.
        const double x0 = omega[i - 1];
        const double x1 = omega[i];
        const double x2 = omega[i + 1];
        const double d01 = (y1 - y0) / (x1 - x0);
        const double d12 = (y2 - y1) / (x2 - x1);
        const double a = (d12 - d01) / (x2 - x0);
        double xv = x1;
        double yv = y1;
        if (a < 0.0) {
            const double b = d01 - a * (x0 + x1);
            xv = std::clamp(-b / (2.0 * a), x0, x2);
            yv = std::max(y1, y1 + d01 * (xv - x1) + a * (xv - x0) * (xv - x1));
        }
        fit.peak_omega.push_back(xv);
        fit.peak_density.push_back(yv / xv);
    }
    const auto m = fit.peak_omega.size();
    if (m < 3) throw InsufficientPeaks("thermal_fit: found " + std::to_string(m) + " lobe maxima, need 3");

    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += fit.peak_omega[i];
        sy += std::log(fit.peak_omega[i] * fit.peak_density[i]);
    }
    const double mx = sx / m;
    const double my = sy / m;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double dx = fit.peak_omega[i] - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(fit.peak_omega[i] * fit.peak_density[i]) - my);
    }
    const double slope = sxy / sxx;
    if (!(slope < 0.0)) throw DomainError("thermal_fit: lobe maxima do not decay with frequency");
    fit.intercept = my - slope * mx;
    fit.temperature = -hbar / (kB * slope);
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = std::log(fit.peak_omega[i] * fit.peak_density[i]) - (fit.intercept + slope * fit.peak_omega[i]);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / m);
    return fit;
}

ThermalFit thermal_fit(const EmissionSpectrum& spectrum, const ThermalFitOptions& opts) {
    const auto w = spectrum.omega();
    const auto n = spectrum.density();
    return thermal_fit(w, n, spectrum.cfg.hbar, spectrum.cfg.kB, opts);
}

const char* to_string(Engine e) { return e == Engine::Analytic ? "analytic" : "floquet"; }

Engine parse_engine(const std::string& s) {
    if (s == "analytic") return Engine::Analytic;
    if (s == "floquet") return Engine::Floquet;
    throw ConfigError("engine: expected analytic or floquet, got '" + s + "'");
}

StimulatedResult stimulated_fractions(const GratingConfig& cfg, double k_tilde, int n, Engine engine) {
    cfg.validate();
    if (!(k_tilde + n * cfg.g > 0.0)) throw DomainError("stimulated_fractions: input rung must be positive");
    StimulatedResult out{engine, k_tilde, n, cfg.c0 * (k_tilde + n * cfg.g) / cfg.eps_b, {}, 0.0, 0};

    auto add = [&](int np, double w, double frac, int& quiet) {
        out.rungs.push_back({np, w, frac});
        out.total += frac;
        quiet = frac <= kStimulatedTailTol * out.total ? quiet + 1 : 0;
        return quiet >= kStimulatedTailRun;
    };

    if (engine == Engine::Analytic) {
        // A uniform or zero-length window leaves the input untouched; the
        // Lorentzian pulse model does not cover that limit.
        if (cfg.alpha == 0.0 || cfg.d == 0.0) return out;
        const auto model = PulseModel::from(cfg);
        int quiet = 0;
        for (int np = first_negative_rung(k_tilde, cfg.g);; --np) {
            const double frac = std::norm(spectral_amplitude(model, k_tilde, n, np).value);
            if (add(np, cfg.c0 * (k_tilde + np * cfg.g) / cfg.eps_b, frac, quiet)) break;
            if (out.rungs.size() > 1'000'000) throw NoConvergence("stimulated_fractions: tail not reached", out.total);
        }
        return out;
    }

    if (!(cfg.Omega > 0.0)) throw DomainError("stimulated_fractions: Omega must be > 0");
    const double base = out.omega_in - n * cfg.Omega;
    const auto col = transmission_column(cfg, base, n, Truncation::auto_());
    out.N_max = col.N_max;
    const int inner = col.N_max - boundary_margin(col.N_max);
    int quiet = 0;
    // Walk the negative rungs starting next to the sign boundary.
    int start = static_cast<int>(std::ceil(-base / cfg.Omega)) - 1;
    while (start > -inner && !(col.omega(start) < 0.0)) --start;
    for (int np = start; np >= -inner; --np) {
        if (!(col.omega(np) < 0.0)) continue;
        if (add(np, col.omega(np), std::norm(col.at(np)), quiet)) break;
    }
    return out;
}

AliasSignature alias_signature(double omega_probe, double Omega) {
    if (!(Omega > 0.0)) throw DomainError("alias_signature: Omega must be > 0");
    double pos = std::fmod(omega_probe, Omega);
    if (pos < 0.0) pos += Omega;
    const double half = 0.5 * Omega;
    const double r = std::fmod(pos, half);
    const double tol = 1e-12 * Omega;
    return {pos, Omega - pos, r < tol || half - r < tol};
}

PhotonCounts photon_counts(const FluxSpectrum& flux) {
    PhotonCounts c{0.0, 0.0, 0.0};
    for (const auto& e : flux.entries) {
        if (!(e.flux >= 0.0)) throw DomainError("photon_counts: fluxes must be >= 0");
        if (e.omega == 0.0) throw DomainError("photon_counts: zero frequency entry");
        c.N += e.flux / (flux.hbar * std::abs(e.omega));
        c.N_tilde += e.flux / (flux.hbar * e.omega);
    }
    c.pairs = 0.5 * (c.N - c.N_tilde);
    return c;
}

FluxSpectrum transmitted_flux(const RungVector& column, double hbar) {
    if (column.is_row) throw DomainError("transmitted_flux: needs a ladder column");
    FluxSpectrum out;
    out.hbar = hbar;
    const double u_in = hbar * std::abs(column.omega(column.fixed_rung));
    const int inner = column.N_max - boundary_margin(column.N_max);
    for (int n = -inner; n <= inner; ++n) {
        const double w = column.omega(n);
        if (w == 0.0) continue;
        out.entries.push_back({w, u_in * std::norm(column.at(n))});
    }
    return out;
}

}  // namespace translume
