#include "tailbound/normal.hpp"

#include <cmath>
#include <stdexcept>

#include "tailbound/constants.hpp"

namespace tailbound {

namespace {

void require_finite(double x) {
    if (!std::isfinite(x)) {
        throw std::domain_error("normal: non-finite argument");
    }
}

// Mills-ratio continued fraction (Lentz):
//   P(Z >= x) = phi(x) / (x + 1/(x + 2/(x + 3/(x + ...)))),  x > 0.
double mills_cf(double x) {
    const double tiny = 1e-300;
    double f = x;
    if (f == 0.0) f = tiny;
    double c = f;
    double d = 0.0;
    for (int n = 1; n < 500; ++n) {
        const double an = static_cast<double>(n);
        d = x + an * d;
        if (d == 0.0) d = tiny;
        c = x + an / c;
        if (c == 0.0) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::fabs(delta - 1.0) < 1e-17) break;
    }
    return 1.0 / f;
}

}  // namespace

double phi(double x) {
    require_finite(x);
    return kInvSqrtTwoPi * std::exp(-0.5 * x * x);
}

double upper_tail(double x) {
    require_finite(x);
    if (x < 0.0) return 1.0 - upper_tail(-x);
    if (x > 38.0) return 0.0;
    double q;
    if (x < 2.0) {
        // Q(x) = 1/2 - 1/2 erf(x/sqrt(2)); the non-alternating series
        //   erf(z) = (2/sqrt(pi)) z e^{-z^2} sum_n (2z^2)^n / (1*3*...*(2n+1))
        // is cancellation-free and the final subtraction loses at most
        // a digit and a half on [0, 2).
        const double z = x / kSqrtTwo;
        const double z2 = 2.0 * z * z;
        double term = 1.0;
        double sum = 1.0;
        for (int n = 1; n < 200; ++n) {
            term *= z2 / (2.0 * n + 1.0);
            sum += term;
            if (term < sum * 1e-18) break;
        }
        const double erf_z = 2.0 * kInvSqrtTwoPi * x * std::exp(-z * z) * sum;
        q = 0.5 - 0.5 * erf_z;
    } else {
        q = phi(x) * mills_cf(x);
    }
    if (q < 0.0) q = 0.0;
    if (q > 1.0) q = 1.0;
    return q;
}

double two_sided_tail(double x) {
    require_finite(x);
    if (x <= 0.0) return 1.0;
    const double t = 2.0 * upper_tail(x);
    return t > 1.0 ? 1.0 : t;
}

double upper_tail_inverse(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("upper_tail_inverse: p must lie in (0, 1)");
    }
    double lo = -40.0, hi = 40.0;  // upper_tail decreasing: f(lo)=1, f(hi)=0
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (upper_tail(mid) > p) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    double x = 0.5 * (lo + hi);
    // Newton polish on Q(x) - p = 0, Q' = -phi.
    for (int i = 0; i < 4; ++i) {
        const double fx = upper_tail(x) - p;
        const double d = phi(x);
        if (d <= 0.0) break;
        const double step = fx / d;
        x += step;
        if (std::fabs(step) < 1e-15 * (1.0 + std::fabs(x))) break;
    }
    return x;
}

}  // namespace tailbound
