#pragma once

namespace tailbound {

/// Standard normal density (2*pi)^{-1/2} exp(-x^2/2).
double phi(double x);

/// P(Z >= x) for a standard normal Z.
///
/// Computed through the complementary error function (power series for
/// small arguments, Mills-ratio continued fraction in the tail) so that
/// relative accuracy is preserved deep into the tail.  Returns 0 for
/// x > 38, where the true value underflows double headroom.
double upper_tail(double x);

/// P(|Z| >= x) = min(1, 2*upper_tail(max(x, 0))).  Equals 1 for x <= 0.
double two_sided_tail(double x);

/// Inverse of upper_tail on (0, 1): the x with P(Z >= x) = p.
/// Bracketed bisection refined with Newton steps; relative tolerance 1e-12.
double upper_tail_inverse(double p);

}  // namespace tailbound
