#pragma once

#include <array>
#include <optional>
#include <string>

namespace tailbound {

/// The bound families handled by this library.
enum class BoundKind { Hoeffding, Markov2, V, W, Wtilde, Edelman15 };

inline constexpr std::array<BoundKind, 6> kAllBoundKinds = {
    BoundKind::Hoeffding, BoundKind::V,        BoundKind::W,
    BoundKind::Wtilde,    BoundKind::Edelman15, BoundKind::Markov2};

/// Lowercase stable name ("hoeffding", "v", "w", "wtilde", "edelman15",
/// "markov2"); used for CLI flags and report columns.
std::string bound_name(BoundKind kind);
std::optional<BoundKind> parse_bound_name(const std::string& name);

/// True for bounds on P(|S| >= x) rather than P(S >= x).
bool is_two_sided(BoundKind kind);

/// Crossing points between the branches of the min-form bounds.
struct CrossingPoints {
    double z_v;       // e^{-z^2/2} = e^lambda P(Z >= z)
    double z_w;       // e^{-z^2/2} = P(Z >= z - lambda/z)
    double z_wtilde;  // 1/z^2 = P(|Z| >= z - lambda/z), z > sqrt(lambda)
};

// All bound functions return 1 for x <= 0 (the trivial bound) and clamp
// their value into [0, 1].

/// e^{-x^2/2}.
double hoeffding_bound(double x);

/// min(e^{-x^2/2}, e^lambda P(Z >= x)).
double v_bound(double x);

/// min(e^{-x^2/2}, P(Z >= x - lambda/x)).
double w_bound(double x);

/// min(1, 1/x^2, P(|Z| >= x - lambda/x)).
double w_tilde_bound(double x);

/// P(Z >= x - 1.5/x).
double edelman_bound(double x);

/// min(1, 1/x^2).
double markov_two_sided(double x);

/// Dispatch by kind.
double bound_value(BoundKind kind, double x);

/// Solves the three crossing equations by bisection to width 1e-13 plus a
/// Newton polish.  Residuals of the defining equations are <= 1e-12.
CrossingPoints solve_crossings();

/// Residual of a crossing point in its defining equation (difference of the
/// two branches), for reporting.
double crossing_residual_v(double z, double lambda);
double crossing_residual_w(double z, double lambda);
double crossing_residual_wtilde(double z, double lambda);

/// Evaluates V, W or Wtilde by piecewise branch selection (no min), using
/// the supplied crossing points.  Agrees with the min form to <= 1e-12.
double piecewise_bound(BoundKind kind, double x, const CrossingPoints& c);

/// Smallest x > 0 with bound_value(kind, x) <= alpha, absolute tolerance
/// 1e-10.  For Wtilde the flat region (0, 1] is never returned.
double invert_bound(BoundKind kind, double alpha);

}  // namespace tailbound
