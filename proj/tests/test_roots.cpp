#include "translume/errors.hpp"
#include "translume/grating.hpp"
#include "translume/numerics.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace translume;
using numerics::find_root_bracketed;

TEST_CASE("bracketed roots", "[roots]") {
    CHECK(find_root_bracketed([](double x) { return x - 1.0; }, 0.0, 2.0, 1e-14) == Catch::Approx(1.0).margin(1e-14));
    CHECK(find_root_bracketed([](double x) { return std::cos(x); }, 0.0, std::numbers::pi, 1e-14) ==
          Catch::Approx(std::numbers::pi / 2).margin(1e-13));
}

TEST_CASE("grating speed crossing", "[roots]") {
    GratingConfig cfg;
    const auto h = [&](double X) { return local_speed(cfg, X) - cfg.grating_speed(); };
    CHECK(find_root_bracketed(h, 0.0, std::numbers::pi, 1e-12) == Catch::Approx(std::numbers::pi / 2).margin(1e-11));
    CHECK(find_root_bracketed(h, std::numbers::pi, 2 * std::numbers::pi, 1e-12) ==
          Catch::Approx(3 * std::numbers::pi / 2).margin(1e-11));
}

TEST_CASE("no sign change", "[roots]") {
    CHECK_THROWS_AS(find_root_bracketed([](double x) { return x * x + 1.0; }, -1.0, 1.0, 1e-12), NoSignChange);
}

TEST_CASE("endpoint roots and reversed brackets", "[roots]") {
    CHECK(find_root_bracketed([](double x) { return x; }, 0.0, 1.0, 1e-12) == 0.0);
    CHECK(find_root_bracketed([](double x) { return x - 0.25; }, 1.0, 0.0, 1e-14) == Catch::Approx(0.25).margin(1e-14));
}
