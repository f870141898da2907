#include "translume/cli.hpp"
#include "translume/emission.hpp"
#include "translume/errors.hpp"
#include "translume/pulse.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <thread>

namespace translume::cli {

int resolve_workers(int requested) {
    if (const char* env = std::getenv("TRANSLUME_WORKERS"); env && *env) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (*end != '\0' || v < 1 || v > 4096) {
            throw ConfigError(std::string("TRANSLUME_WORKERS: expected a positive integer, got '") + env + "'");
        }
        return static_cast<int>(v);
    }
    if (requested > 0) return requested;
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Context {
    RunConfig cfg;
    std::filesystem::path out_dir;
    Format format;
    int workers;
    std::ostream& out;
};

std::filesystem::path stem(const Context& ctx, const std::string& name) { return ctx.out_dir / name; }

int cmd_rays(const Context& ctx) {
    const auto& g = ctx.cfg.grating;
    const auto& rb = ctx.cfg.rays;
    std::optional<HorizonSet> horizons;
    if (g.transluminal()) horizons = find_horizons(g);
    double origin = 0.0;
    if (rb.from_horizon) {
        if (!horizons) {
            throw ConfigError("rays.from_horizon: grating is not transluminal, so there are no horizons to launch from");
        }
        const auto acc = std::find_if(horizons->begin(), horizons->end(),
                                      [](const Horizon& h) { return h.kind == HorizonKind::Accumulation; });
        origin = acc->X + g.grating_speed() * rb.t0;
    }

    RayOptions opts;
    opts.rtol = rb.rtol;
    int stalled = 0;
    for (std::size_t i = 0; i < rb.x0.size(); ++i) {
        const auto traj = trace_ray(g, origin + rb.x0[i], rb.t0, rb.t_end, opts);
        stalled += traj.stalled ? 1 : 0;
        Table t{{"t", "x", "X"}, {}};
        for (const auto& s : traj.samples) t.rows.push_back({s.t, s.x, s.X});
        write_table(t, stem(ctx, "ray_" + std::to_string(i)), ctx.format);
    }
    if (horizons) {
        Table t{{"X", "kind", "dcdX"}, {}};
        for (const auto& h : *horizons) t.rows.push_back({h.X, std::string(to_string(h.kind)), h.dcdX});
        write_table(t, stem(ctx, "horizons"), ctx.format);
    }
    ctx.out << "rays=" << rb.x0.size() << " stalled=" << stalled << " horizons=" << (horizons ? horizons->size() : 0)
            << "\n";
    return 0;
}

int cmd_spectrum(const Context& ctx) {
    const auto& sb = ctx.cfg.spectrum;
    const auto& g = ctx.cfg.grating;
    if (!(sb.k_tilde + sb.n * g.g > 0.0)) throw ConfigError("spectrum.n: input rung k_tilde + n g must be positive");
    if (!(sb.k_tilde + sb.n_prime_max * g.g < 0.0)) {
        throw ConfigError("spectrum.n_prime_max: output rungs must satisfy k_tilde + n' g < 0");
    }
    const auto model = PulseModel::from(g);
    Table t{{"n_prime", "reF", "imF", "absF2"}, {}};
    for (int np = sb.n_prime_max; np >= sb.n_prime_min; --np) {
        const auto F = spectral_amplitude(model, sb.k_tilde, sb.n, np);
        t.rows.push_back({std::int64_t{np}, F.value.real(), F.value.imag(), std::norm(F.value)});
    }
    write_table(t, stem(ctx, "spectrum"), ctx.format);

    const auto th = hawking_temperature(g);
    nlohmann::ordered_json meta;
    meta["tool"] = std::string("translume ") + version();
    meta["k_tilde"] = sb.k_tilde;
    meta["n"] = sb.n;
    meta["gamma"] = model.gamma;
    meta["long_grating"] = model.long_grating;
    meta["T_H"] = th.from_g;
    meta["T_H_Omega"] = th.from_Omega;
    meta["T_H_forms_differ"] = th.forms_differ;
    std::filesystem::create_directories(ctx.out_dir);
    std::ofstream(ctx.out_dir / "spectrum_meta.json") << meta.dump(1) << "\n";
    ctx.out << "gamma=" << format_double(model.gamma) << " T_H=" << format_double(th.from_g) << "\n";
    return 0;
}

struct VacuumOutcome {
    EmissionSpectrum spectrum;
    double T_fit = kNaN;
    double residual = kNaN;
    int peaks = 0;
};

VacuumOutcome run_vacuum(const RunConfig& rc, const GratingConfig& g, int workers) {
    const auto& vb = rc.vacuum;
    const auto grid = default_grid(g.Omega, vb.points, vb.span);
    const auto trunc = vb.n_max > 0 ? Truncation::fixed(vb.n_max) : Truncation::auto_();
    VacuumOutcome o{vacuum_spectrum(g, grid, trunc, workers)};
    ThermalFitOptions fo;
    fo.omega_min = vb.fit_omega_min;
    if (vb.fit_omega_max > 0.0) fo.omega_max = vb.fit_omega_max;
    try {
        const auto fit = thermal_fit(o.spectrum, fo);
        o.T_fit = fit.temperature;
        o.residual = fit.residual;
        o.peaks = static_cast<int>(fit.peak_omega.size());
    } catch (const InsufficientPeaks&) {
    } catch (const DomainError&) {
    }
    return o;
}

int cmd_vacuum(const Context& ctx) {
    const auto& rc = ctx.cfg;
    if (!(rc.grating.Omega > 0.0)) throw ConfigError("grating.Omega: vacuum spectrum needs Omega > 0");
    std::vector<double> ds = rc.vacuum.d_list;
    if (ds.empty()) ds.push_back(rc.grating.d);
    Table summary{{"d", "T_fit", "T_H", "fit_residual", "peaks", "energy_per_period"}, {}};
    for (std::size_t i = 0; i < ds.size(); ++i) {
        GratingConfig g = rc.grating;
        g.d = ds[i];
        const auto o = run_vacuum(rc, g, ctx.workers);
        Table t{{"omega", "density"}, {}};
        for (const auto& p : o.spectrum.points) t.rows.push_back({p.omega, p.density});
        write_table(t, stem(ctx, ds.size() == 1 ? "vacuum" : "vacuum_" + std::to_string(i)), ctx.format);
        const double TH = hawking_temperature(g).from_Omega;
        summary.rows.push_back({g.d, o.T_fit, TH, o.residual, std::int64_t{o.peaks}, o.spectrum.energy_per_period});
        ctx.out << "d=" << format_double(g.d) << " T_fit=" << format_double(o.T_fit) << " T_H=" << format_double(TH)
                << " energy_per_period=" << format_double(o.spectrum.energy_per_period) << "\n";
    }
    write_table(summary, stem(ctx, "vacuum_summary"), ctx.format);
    return 0;
}

int cmd_stimulated(const Context& ctx, Engine engine) {
    const auto& sb = ctx.cfg.stimulated;
    const auto& g = ctx.cfg.grating;
    const auto r = stimulated_fractions(g, sb.k_tilde, sb.n, engine);
    Table t{{"n_prime", "omega", "fraction"}, {}};
    for (const auto& f : r.rungs) t.rows.push_back({std::int64_t{f.n_prime}, f.omega, f.fraction});
    write_table(t, stem(ctx, "stimulated"), ctx.format);
    ctx.out << "engine=" << to_string(engine) << "\n";
    ctx.out << "total_negative_fraction=" << format_double(r.total) << "\n";
    if (g.Omega > 0.0) {
        const double probe = sb.probe > 0.0 ? sb.probe : r.omega_in;
        const auto a = alias_signature(probe, g.Omega);
        ctx.out << "alias_probe=" << format_double(probe) << "\n"
                << "alias_positive=" << format_double(a.positive_alias) << "\n"
                << "alias_negative=" << format_double(a.negative_alias) << "\n"
                << "alias_degenerate=" << (a.degenerate ? "true" : "false") << "\n";
    }
    return 0;
}

void apply_sweep_value(RunConfig& rc, const std::string& key, double v) {
    auto& g = rc.grating;
    if (key == "eps_b") g.eps_b = v;
    else if (key == "alpha") g.alpha = v;
    else if (key == "g") g.g = v;
    else if (key == "Omega") g.Omega = v;
    else if (key == "d") g.d = v;
    else if (key == "c0") g.c0 = v;
    else if (key == "k_tilde") rc.stimulated.k_tilde = v;
    else if (key == "n") {
        if (v != std::floor(v)) throw ConfigError("sweep.n: values must be integers");
        rc.stimulated.n = static_cast<int>(v);
    }
}

int cmd_sweep(const Context& ctx, Engine engine) {
    const auto& sw = ctx.cfg.sweep;
    if (sw.lists.empty()) {
        throw ConfigError(
            "sweep: no parameter lists declared\n"
            "usage: [sweep] target = stimulated|vacuum, then one 'key = v1, v2, ...' line per swept key "
            "(eps_b, alpha, g, Omega, d, c0, k_tilde, n)");
    }
    std::size_t count = 1;
    for (const auto& [key, values] : sw.lists) {
        if (values.empty()) throw ConfigError("sweep." + key + ": empty list");
        count *= values.size();
    }
    std::vector<RunConfig> points(count, ctx.cfg);
    std::vector<std::vector<double>> coords(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t rem = i;
        std::vector<double> c(sw.lists.size());
        for (std::size_t k = sw.lists.size(); k-- > 0;) {
            const auto& values = sw.lists[k].second;
            c[k] = values[rem % values.size()];
            rem /= values.size();
        }
        for (std::size_t k = 0; k < c.size(); ++k) apply_sweep_value(points[i], sw.lists[k].first, c[k]);
        try {
            points[i].grating.validate();
        } catch (const ConfigError& e) {
            throw ConfigError("sweep point " + std::to_string(i) + ": " + e.what());
        }
        const auto& sb = points[i].stimulated;
        if (!(sb.k_tilde >= 0.0 && sb.k_tilde < points[i].grating.g && sb.k_tilde + sb.n * points[i].grating.g > 0.0)) {
            throw ConfigError("sweep point " + std::to_string(i) + ": k_tilde/n outside the allowed range");
        }
        coords[i] = std::move(c);
    }

    const bool vacuum = sw.target == "vacuum";
    std::vector<std::vector<Cell>> results(count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                const auto& rc = points[i];
                if (vacuum) {
                    const auto o = run_vacuum(rc, rc.grating, 1);
                    results[i] = {o.spectrum.energy_per_period, o.T_fit, hawking_temperature(rc.grating).from_Omega};
                } else {
                    const auto r = stimulated_fractions(rc.grating, rc.stimulated.k_tilde, rc.stimulated.n, engine);
                    results[i] = {r.total, static_cast<std::int64_t>(r.rungs.size()), std::int64_t{r.N_max}};
                }
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    {
        const auto n = static_cast<std::size_t>(std::min<std::size_t>(static_cast<std::size_t>(ctx.workers), count));
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < std::max<std::size_t>(1, n); ++w) pool.emplace_back(worker);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    Table t;
    for (const auto& [key, values] : sw.lists) t.columns.push_back(key);
    if (vacuum) {
        t.columns.insert(t.columns.end(), {"energy_per_period", "T_fit", "T_H"});
    } else {
        t.columns.insert(t.columns.end(), {"total_negative_fraction", "rungs", "N_max"});
    }
    for (std::size_t i = 0; i < count; ++i) {
        std::vector<Cell> row;
        for (double v : coords[i]) row.emplace_back(v);
        row.insert(row.end(), results[i].begin(), results[i].end());
        t.rows.push_back(std::move(row));
    }
    write_table(t, stem(ctx, "sweep"), ctx.format);
    ctx.out << "sweep_points=" << count << " target=" << sw.target << "\n";
    return 0;
}

}  // namespace

int run(const Invocation& inv, std::ostream& out, std::ostream& err) {
    try {
        static const std::vector<std::string> commands = {"rays", "spectrum", "vacuum", "stimulated", "sweep"};
        if (std::find(commands.begin(), commands.end(), inv.command) == commands.end()) {
            throw ConfigError("unknown command '" + inv.command + "' (expected rays, spectrum, vacuum, stimulated or sweep)");
        }
        RunConfig cfg = load_run_config(inv.config);
        if (!inv.out_dir.empty()) cfg.output.dir = inv.out_dir;
        if (!inv.format.empty()) cfg.output.format = parse_format(inv.format);
        const Engine engine = parse_engine(inv.engine.empty() ? cfg.stimulated.engine : inv.engine);
        const Context ctx{cfg, cfg.output.dir, cfg.output.format, resolve_workers(inv.workers), out};

        if (inv.command == "rays") return cmd_rays(ctx);
        if (inv.command == "spectrum") return cmd_spectrum(ctx);
        if (inv.command == "vacuum") return cmd_vacuum(ctx);
        if (inv.command == "stimulated") return cmd_stimulated(ctx, engine);
        return cmd_sweep(ctx, engine);
    } catch (const ConfigError& e) {
        err << "translume: configuration error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "translume: numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "translume: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace translume::cli
