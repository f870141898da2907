#include "oracles.hpp"
#include "translume/errors.hpp"
#include "translume/grating.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace translume;
using std::numbers::pi;

TEST_CASE("profile and local speed", "[grating]") {
    GratingConfig cfg;
    cfg.eps_b = 1.0;
    cfg.alpha = 0.1;
    CHECK(refractive_profile(cfg, 0.0) == Catch::Approx(1.2));
    CHECK(local_speed(cfg, 0.0) == Catch::Approx(1.0 / 1.2));
    CHECK(local_speed(cfg, pi) == Catch::Approx(1.0 / 0.8));
    // Default grating: eps_b = 1, alpha = 0.05, c_g = 1
    GratingConfig def;
    CHECK(def.min_speed() == Catch::Approx(1.0 / 1.1));
    CHECK(def.max_speed() == Catch::Approx(1.0 / 0.9));
    CHECK(def.transluminal());
}

TEST_CASE("validation names the offending field", "[grating]") {
    GratingConfig cfg;
    cfg.alpha = 0.6;
    try {
        cfg.validate();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("alpha") != std::string::npos);
    }
    GratingConfig bad_g;
    bad_g.g = 0.0;
    CHECK_THROWS_AS(bad_g.validate(), ConfigError);
    GratingConfig bad_d;
    bad_d.d = -1.0;
    CHECK_THROWS_AS(bad_d.validate(), ConfigError);
}

TEST_CASE("transluminal range is strict", "[grating]") {
    GratingConfig cfg;
    cfg.Omega = cfg.g * cfg.max_speed();
    CHECK_FALSE(cfg.transluminal());
    cfg.Omega = cfg.g * cfg.min_speed();
    CHECK_FALSE(cfg.transluminal());
    cfg.Omega = 2.0;
    CHECK_FALSE(cfg.transluminal());
    CHECK_THROWS_AS(find_horizons(cfg), NotTransluminal);
}

TEST_CASE("horizons of the default grating", "[grating]") {
    GratingConfig cfg;
    const auto hs = find_horizons(cfg);
    REQUIRE(hs.size() == 2);
    CHECK(hs[0].X == Catch::Approx(pi / 2).margin(1e-10));
    CHECK(hs[0].kind == HorizonKind::Dispersal);
    CHECK(hs[0].dcdX > 0);
    CHECK(hs[1].X == Catch::Approx(3 * pi / 2).margin(1e-10));
    CHECK(hs[1].kind == HorizonKind::Accumulation);
    CHECK(hs[1].dcdX < 0);
    for (const auto& h : hs) CHECK(std::abs(local_speed(cfg, h.X) - cfg.grating_speed()) < 1e-12);
}

TEST_CASE("co-moving parameters", "[grating]") {
    GratingConfig cfg;
    cfg.Omega = 0.5;  // subluminal grating, no poles
    for (double X : {0.0, 0.7, 2.0, 4.5}) {
        const auto p = comoving_params(cfg, X);
        const double e = refractive_profile(cfg, X);
        const double c = local_speed(cfg, X);
        const double cg = cfg.grating_speed();
        const double denom = 1.0 - cg * cg / (c * c);
        CHECK(p.eps == Catch::Approx(e / denom));
        CHECK(p.mu == Catch::Approx(p.eps));
        CHECK(p.xi == Catch::Approx(-e * e * cg / denom));
    }
    GratingConfig tr;
    CHECK_THROWS_AS(comoving_params(tr, pi / 2), HorizonSingularity);
}

TEST_CASE("straight rays without modulation", "[grating]") {
    GratingConfig cfg;
    cfg.alpha = 0.0;
    cfg.eps_b = 1.5;
    cfg.Omega = 0.3;
    const auto r = trace_ray(cfg, 0.25, 0.0, 20.0);
    REQUIRE_FALSE(r.samples.empty());
    for (const auto& s : r.samples) {
        CHECK(s.x == Catch::Approx(0.25 + s.t / 1.5).margin(1e-9));
    }
}

TEST_CASE("rays never cross a horizon", "[grating][property]") {
    GratingConfig cfg;
    const auto hs = find_horizons(cfg);
    const double P = cfg.period();
    for (int i = 0; i < 24; ++i) {
        const double x0 = -P + (i + 0.5) * (2.0 * P / 24.0);
        const auto r = trace_ray(cfg, x0, 0.0, 200.0);
        REQUIRE(r.samples.size() >= 2);
        const double X0 = r.samples.front().X;
        for (const auto& h : hs) {
            // Horizon copies on the unwrapped axis.
            for (int k = -4; k <= 4; ++k) {
                const double Xh = h.X + k * P;
                for (const auto& s : r.samples) {
                    CHECK((s.X - Xh) * (X0 - Xh) >= 0.0);
                }
            }
        }
    }
}

TEST_CASE("rays approach the accumulation horizon", "[grating]") {
    GratingConfig cfg;
    const auto r = trace_ray(cfg, pi, 0.0, 400.0);
    const double X_end = r.samples.back().X;
    CHECK(std::abs(X_end - 3 * pi / 2) < 1e-3);
}

TEST_CASE("adaptive rays match a fixed-step oracle", "[grating]") {
    GratingConfig cfg;
    cfg.alpha = 0.08;
    cfg.Omega = 1.02;
    for (double x0 : {0.3, 2.0, 4.0}) {
        const auto r = trace_ray(cfg, x0, 0.0, 30.0, {1e-12});
        const double ref = oracle::fixed_step_X(cfg, x0, 0.0, 30.0, 1e-3);
        CHECK(r.samples.back().X == Catch::Approx(ref).margin(1e-7));
    }
}

TEST_CASE("launch on a horizon stays put", "[grating]") {
    GratingConfig cfg;
    const auto hs = find_horizons(cfg);
    const auto r = trace_ray(cfg, hs[0].X, 0.0, 10.0);
    for (const auto& s : r.samples) CHECK(s.X == Catch::Approx(hs[0].X).margin(1e-12));
}
