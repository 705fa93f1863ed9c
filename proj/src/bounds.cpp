#include "tailbound/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "tailbound/constants.hpp"
#include "tailbound/normal.hpp"

namespace tailbound {

namespace {

double clamp01(double p) {
    if (p < 0.0) return 0.0;
    if (p > 1.0) return 1.0;
    return p;
}

template <class F, class DF>
double bisect_newton(F f, DF df, double lo, double hi) {
    // f(lo) and f(hi) must bracket a root; bisect to width 1e-13, then one
    // Newton polish.
    double flo = f(lo);
    double fhi = f(hi);
    if (!(flo * fhi < 0.0)) {
        throw std::runtime_error("crossing solver: bracket failure");
    }
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    double z = 0.5 * (lo + hi);
    const double d = df(z);
    if (d != 0.0) z -= f(z) / d;
    return z;
}

}  // namespace

std::string bound_name(BoundKind kind) {
    switch (kind) {
        case BoundKind::Hoeffding: return "hoeffding";
        case BoundKind::Markov2: return "markov2";
        case BoundKind::V: return "v";
        case BoundKind::W: return "w";
        case BoundKind::Wtilde: return "wtilde";
        case BoundKind::Edelman15: return "edelman15";
    }
    return "?";
}

std::optional<BoundKind> parse_bound_name(const std::string& name) {
    for (BoundKind k : kAllBoundKinds) {
        if (bound_name(k) == name) return k;
    }
    return std::nullopt;
}

bool is_two_sided(BoundKind kind) {
    return kind == BoundKind::Markov2 || kind == BoundKind::Wtilde;
}

double hoeffding_bound(double x) {
    if (x <= 0.0) return 1.0;
    return clamp01(std::exp(-0.5 * x * x));
}

double v_bound(double x) {
    if (x <= 0.0) return 1.0;
    return clamp01(std::min(std::exp(-0.5 * x * x), kExpLambda * upper_tail(x)));
}

double w_bound(double x) {
    if (x <= 0.0) return 1.0;
    return clamp01(
        std::min(std::exp(-0.5 * x * x), upper_tail(x - kLambda / x)));
}

double w_tilde_bound(double x) {
    if (x <= 0.0) return 1.0;
    return clamp01(std::min(1.0 / (x * x), two_sided_tail(x - kLambda / x)));
}

double edelman_bound(double x) {
    if (x <= 0.0) return 1.0;
    return clamp01(upper_tail(x - 1.5 / x));
}

double markov_two_sided(double x) {
    if (x <= 0.0) return 1.0;
    return clamp01(1.0 / (x * x));
}

double bound_value(BoundKind kind, double x) {
    switch (kind) {
        case BoundKind::Hoeffding: return hoeffding_bound(x);
        case BoundKind::Markov2: return markov_two_sided(x);
        case BoundKind::V: return v_bound(x);
        case BoundKind::W: return w_bound(x);
        case BoundKind::Wtilde: return w_tilde_bound(x);
        case BoundKind::Edelman15: return edelman_bound(x);
    }
    throw std::logic_error("bound_value: bad kind");
}

double crossing_residual_v(double z, double lambda) {
    return std::exp(-0.5 * z * z) - std::exp(lambda) * upper_tail(z);
}

double crossing_residual_w(double z, double lambda) {
    return std::exp(-0.5 * z * z) - upper_tail(z - lambda / z);
}

double crossing_residual_wtilde(double z, double lambda) {
    return 1.0 / (z * z) - two_sided_tail(z - lambda / z);
}

CrossingPoints solve_crossings() {
    const double lam = kLambda;
    CrossingPoints c{};
    c.z_v = bisect_newton(
        [lam](double z) { return crossing_residual_v(z, lam); },
        [lam](double z) {
            return -z * std::exp(-0.5 * z * z) + std::exp(lam) * phi(z);
        },
        1.0, 2.0);
    c.z_w = bisect_newton(
        [lam](double z) { return crossing_residual_w(z, lam); },
        [lam](double z) {
            return -z * std::exp(-0.5 * z * z) +
                   phi(z - lam / z) * (1.0 + lam / (z * z));
        },
        1.0, 2.0);
    c.z_wtilde = bisect_newton(
        [lam](double z) { return crossing_residual_wtilde(z, lam); },
        [lam](double z) {
            return -2.0 / (z * z * z) +
                   2.0 * phi(z - lam / z) * (1.0 + lam / (z * z));
        },
        kSqrtLambda + 1e-6, 3.0);
    return c;
}

double piecewise_bound(BoundKind kind, double x, const CrossingPoints& c) {
    if (x <= 0.0) return 1.0;
    switch (kind) {
        case BoundKind::V:
            return clamp01(x <= c.z_v ? std::exp(-0.5 * x * x)
                                      : kExpLambda * upper_tail(x));
        case BoundKind::W:
            return clamp01(x <= c.z_w ? std::exp(-0.5 * x * x)
                                      : upper_tail(x - kLambda / x));
        case BoundKind::Wtilde:
            if (x <= 1.0) return 1.0;
            if (x <= c.z_wtilde) return 1.0 / (x * x);
            return clamp01(two_sided_tail(x - kLambda / x));
        default:
            throw std::invalid_argument(
                "piecewise_bound: only V, W, Wtilde have piecewise forms");
    }
}

double invert_bound(BoundKind kind, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::domain_error("invert_bound: alpha must lie in (0, 1)");
    }
    // Every bound is nonincreasing with value 1 near 0+, so the solution set
    // {x : bound <= alpha} is a half line [x*, inf).
    double lo = 1e-12;
    double hi = 1.0;
    while (bound_value(kind, hi) > alpha) {
        hi *= 2.0;
        if (hi > 1e9) {
            throw std::runtime_error("invert_bound: no solution found");
        }
    }
    while (hi - lo > 1e-12 * (1.0 + hi)) {
        const double mid = 0.5 * (lo + hi);
        if (bound_value(kind, mid) <= alpha) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

}  // namespace tailbound
