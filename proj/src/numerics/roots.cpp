#include "translume/errors.hpp"
#include "translume/numerics.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdint>
#include <string>

namespace translume::numerics {

double find_root_bracketed(const std::function<double(double)>& f, double lo, double hi, double tol,
                           double scale) {
    if (lo > hi) std::swap(lo, hi);
    const double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (std::signbit(flo) == std::signbit(fhi)) {
        throw NoSignChange("no sign change on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    const double width_tol = tol * scale;
    auto done = [&](double a, double b) {
        const double w = std::abs(b - a);
        return w <= width_tol || w <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b));
    };
    std::uintmax_t max_iter = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(
        [&](double x) { return f(x); }, lo, hi, flo, fhi, done, max_iter);
    const double fa = f(a);
    const double fb = f(b);
    const double root = std::abs(fa) <= std::abs(fb) ? a : b;
    if (std::abs(f(root)) > tol && !done(a, b)) {
        throw NoConvergence("bracketed root finder stalled", root);
    }
    return root;
}

}  // namespace translume::numerics
