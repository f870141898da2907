#include "oracles.hpp"
#include "translume/simd.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace translume;
using cd = std::complex<double>;

namespace {

struct Fixture {
    numerics::Tridiagonal M;
    std::vector<cd> x;
    std::vector<double> w;
};

Fixture random_fixture(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Fixture f{numerics::Tridiagonal(n), std::vector<cd>(n), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        f.M.diag[i] = {u(rng), u(rng)};
        if (i > 0) f.M.lower[i] = {u(rng), u(rng)};
        if (i + 1 < n) f.M.upper[i] = {u(rng), u(rng)};
        f.x[i] = {u(rng), u(rng)};
        f.w[i] = u(rng);
    }
    return f;
}

double max_diff(const std::vector<cd>& a, const std::vector<cd>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

simd::TridiagView view(const numerics::Tridiagonal& M) {
    return {M.lower.data(), M.diag.data(), M.upper.data(), M.size()};
}

}  // namespace

TEST_CASE("scalar matvec matches the plain recurrence", "[simd]") {
    const auto& k = simd::kernels(simd::Isa::Scalar);
    for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 16u, 17u, 257u}) {
        auto f = random_fixture(n, 11 + n);
        std::vector<cd> y(n);
        const double peak = k.tridiag_matvec(view(f.M), f.x.data(), y.data(), 0.5);
        auto ref = oracle::tridiag_apply(f.M, f.x);
        double ref_peak = 0.0;
        for (auto& v : ref) {
            v *= 0.5;
            ref_peak = std::max(ref_peak, std::abs(v));
        }
        CHECK(max_diff(y, ref) < 1e-15);
        CHECK(peak == Catch::Approx(ref_peak).epsilon(1e-14));
    }
}

TEST_CASE("AVX2 kernels agree with the scalar reference", "[simd]") {
    if (!simd::supported(simd::Isa::Avx2)) SKIP("AVX2+FMA not available on this host");
    const auto& s = simd::kernels(simd::Isa::Scalar);
    const auto& v = simd::kernels(simd::Isa::Avx2);
    REQUIRE(v.isa == simd::Isa::Avx2);
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 6u, 7u, 8u, 31u, 64u, 129u, 1025u}) {
        auto f = random_fixture(n, 97 + n);
        INFO("n = " << n);

        std::vector<cd> ys(n), yv(n);
        const double ps = s.tridiag_matvec(view(f.M), f.x.data(), ys.data(), 1.75);
        const double pv = v.tridiag_matvec(view(f.M), f.x.data(), yv.data(), 1.75);
        CHECK(max_diff(ys, yv) < 1e-14);
        CHECK(std::abs(ps - pv) <= 1e-14 * std::max(1.0, ps));

        auto fs = f.x;
        auto fv = f.x;
        const double as = s.accumulate(ys.data(), fs.data(), n);
        const double av = v.accumulate(ys.data(), fv.data(), n);
        CHECK(max_diff(fs, fv) == 0.0);
        CHECK(as == av);

        const cd a{0.3, -1.1};
        s.scale(fs.data(), a, n);
        v.scale(fv.data(), a, n);
        CHECK(max_diff(fs, fv) < 1e-15);

        const double ws = s.weighted_norm2(f.w.data(), f.x.data(), n);
        const double wv = v.weighted_norm2(f.w.data(), f.x.data(), n);
        CHECK(std::abs(ws - wv) <= 1e-13 * std::max(1.0, std::abs(ws)));
    }
}

TEST_CASE("dispatch returns a supported table", "[simd]") {
    const auto& k = simd::kernels();
    CHECK(simd::supported(k.isa));
    CHECK(simd::kernels(simd::Isa::Scalar).isa == simd::Isa::Scalar);
    CHECK(std::string(simd::to_string(simd::Isa::Avx2)) == "avx2");
}
