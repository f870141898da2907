#include "translume/errors.hpp"
#include "translume/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

namespace translume::numerics {
namespace {

// Kronrod 15-point abscissae/weights with the embedded 7-point Gauss rule
// (QUADPACK qk15). Index 7 is the centre; odd indices are Gauss nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
struct Panel {
    double a;
    double b;
    T value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class T, class F>
Panel<T> gk15(const F& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const T fc = f(centre);
    T kronrod = fc * kWgk[7];
    T gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const T f1 = f(centre - dx);
        const T f2 = f(centre + dx);
        kronrod += (f1 + f2) * kWgk[j];
        if (j % 2 == 1) gauss += (f1 + f2) * kWg[j / 2];
    }
    const T value = kronrod * half;
    const double error = std::abs((kronrod - gauss) * half);
    return {a, b, value, error};
}

template <class T, class F>
QuadratureResult<T> adaptive(const F& f, double a, double b, double rel_tol, double abs_tol,
                             std::size_t max_evaluations) {
    QuadratureResult<T> out;
    if (a == b) return out;
    const double sign = b > a ? 1.0 : -1.0;
    if (sign < 0) std::swap(a, b);

    std::priority_queue<Panel<T>> heap;
    heap.push(gk15<T>(f, a, b));
    out.evaluations = 15;
    T total = heap.top().value;
    double error = heap.top().error;
    // Panels at the resolution limit of their own position are accepted as
    // they stand; their error still counts towards the estimate but no
    // longer drives refinement.
    auto at_resolution = [](const Panel<T>& p) {
        const double scale = std::max({std::abs(p.a), std::abs(p.b), std::numeric_limits<double>::min()});
        return p.b - p.a <= 64.0 * std::numeric_limits<double>::epsilon() * scale;
    };
    std::vector<Panel<T>> frozen;
    double frozen_error = 0.0;

    while (error - frozen_error > std::max(rel_tol * std::abs(total), abs_tol)) {
        if (heap.empty()) break;
        if (out.evaluations + 30 > max_evaluations) {
            throw NoConvergence("adaptive quadrature exceeded " + std::to_string(max_evaluations) +
                                    " evaluations (error " + std::to_string(error) + ")",
                                std::abs(total));
        }
        Panel<T> worst = heap.top();
        heap.pop();
        if (at_resolution(worst)) {
            frozen.push_back(worst);
            frozen_error += worst.error;
            continue;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        const Panel<T> left = gk15<T>(f, worst.a, mid);
        const Panel<T> right = gk15<T>(f, mid, worst.b);
        out.evaluations += 30;
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed the drift of the running updates.
    T sum{};
    double err = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    for (const auto& p : frozen) {
        sum += p.value;
        err += p.error;
    }
    out.value = sum * sign;
    out.abs_error_estimate = err;
    return out;
}

template <class T, class F>
QuadratureResult<T> semi_infinite_log_panels(const F& f, double a, DecayHint decay,
                                             const QuadratureOptions& opts) {
    QuadratureResult<T> out;
    auto mapped = [&](double u) -> T {
        return f(a + std::expm1(u)) * std::exp(u);
    };
    auto tail_bound = [&](double z) {
        const double fz = std::abs(f(z));
        if (decay.kind == DecayHint::Kind::Exponential) return fz / decay.rate;
        return fz * std::max(std::abs(z), z - a + 1.0) / (decay.rate - 1.0);
    };
    constexpr double kPanelWidth = 1.0;
    constexpr double kMaxU = 600.0;
    int quiet_panels = 0;
    double u = 0.0;
    while (true) {
        const double remaining = opts.max_evaluations > out.evaluations ? opts.max_evaluations - out.evaluations : 0;
        // Panels far out in the tail only need to be resolved relative to
        // what has already been accumulated.
        const double panel_floor =
            std::max(opts.abs_tol, opts.rel_tol * std::abs(out.value)) / 8.0;
        auto panel = adaptive<T>(mapped, u, u + kPanelWidth, opts.rel_tol, panel_floor,
                                 static_cast<std::size_t>(remaining));
        out.value += panel.value;
        out.abs_error_estimate += panel.abs_error_estimate;
        out.evaluations += panel.evaluations;
        u += kPanelWidth;
        const double z_end = a + std::expm1(u);
        const double z_mid = a + std::expm1(u - 0.5 * kPanelWidth);
        const double bound = std::max(tail_bound(z_end), tail_bound(z_mid));
        out.evaluations += 2;
        const double target = std::max(opts.rel_tol * std::abs(out.value), opts.abs_tol);
        quiet_panels = bound < target ? quiet_panels + 1 : 0;
        if (quiet_panels >= 2) {
            out.abs_error_estimate += bound;
            return out;
        }
        if (u > kMaxU || !std::isfinite(std::abs(out.value))) {
            throw NoConvergence("semi-infinite quadrature: tail bound never fell below target "
                                "(check decay hint)",
                                std::abs(out.value));
        }
    }
}

template <class T, class F>
QuadratureResult<T> semi_infinite(const F& f, double a, DecayHint decay, const QuadratureOptions& opts) {
    if (!(decay.rate > 0.0) || (decay.kind == DecayHint::Kind::Algebraic && decay.rate <= 1.0)) {
        throw DomainError("decay hint rate must be > 0 (exponential) or > 1 (algebraic)");
    }
    const auto primary = semi_infinite_log_panels<T>(f, a, decay, opts);

    auto rational = [&](double t) -> T {
        const double s = 1.0 - t;
        if (s <= 0.0) return T{};
        const double z = a + t / s;
        if (!std::isfinite(z)) return T{};
        return f(z) / (s * s);
    };
    const auto secondary = adaptive<T>(rational, 0.0, 1.0, opts.rel_tol, opts.abs_tol,
                                       opts.max_evaluations);

    const double diff = std::abs(primary.value - secondary.value);
    const double target = std::max(opts.rel_tol * std::abs(primary.value), opts.abs_tol);
    if (diff > 10.0 * target + primary.abs_error_estimate + secondary.abs_error_estimate) {
        throw NoConvergence("semi-infinite quadrature: change-of-variables cross-check disagrees by " +
                                std::to_string(diff),
                            std::abs(primary.value));
    }
    QuadratureResult<T> out = primary;
    out.abs_error_estimate = std::max(primary.abs_error_estimate, diff);
    out.evaluations += secondary.evaluations;
    return out;
}

}  // namespace

QuadratureResult<double> integrate(const RealIntegrand& f, double a, double b, const QuadratureOptions& opts) {
    return adaptive<double>(f, a, b, opts.rel_tol, opts.abs_tol, opts.max_evaluations);
}

QuadratureResult<cd> integrate(const ComplexIntegrand& f, double a, double b, const QuadratureOptions& opts) {
    return adaptive<cd>(f, a, b, opts.rel_tol, opts.abs_tol, opts.max_evaluations);
}

QuadratureResult<double> integrate_semi_infinite(const RealIntegrand& f, double a, DecayHint decay,
                                                 const QuadratureOptions& opts) {
    return semi_infinite<double>(f, a, decay, opts);
}

QuadratureResult<cd> integrate_semi_infinite(const ComplexIntegrand& f, double a, DecayHint decay,
                                             const QuadratureOptions& opts) {
    return semi_infinite<cd>(f, a, decay, opts);
}

}  // namespace translume::numerics
