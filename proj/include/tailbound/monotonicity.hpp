#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace tailbound {

/// Shape of a function on an interval, judged from grid differences.
enum class Pattern { Decreasing, UpDown, Other };

std::string pattern_name(Pattern p);

struct PatternReport {
    Pattern detected = Pattern::Other;
    std::optional<double> switch_point;  // argmax when UpDown
    double max_violation = 0.0;  // worst difference contradicting the pattern
};

/// A ratio r = f/g with closed-form rho = f'/g' on an open interval (a, b),
/// together with the shapes the l'Hospital-type rule predicts.
struct RatioCase {
    std::string name;
    std::function<double(double)> f;
    std::function<double(double)> g;
    std::function<double(double)> rho;
    double a;
    double b;  // infinity truncated at 38 by the factories below
    Pattern expected_rho;
    // r is expected to be Decreasing or UpDown; "above one" cases also
    // require r > 1 on (check_above_one_from, b).
    std::optional<double> check_above_one_from;
};

struct LHopitalReport {
    PatternReport rho_report;
    PatternReport r_report;
    bool premise_ok = false;     // rho matched its expected shape
    bool conclusion_ok = false;  // r is Decreasing or UpDown
    double f_at_b = 0.0;         // boundary values at the truncation point
    double g_at_b = 0.0;
    bool above_one_ok = true;
    double min_r_checked = 0.0;
};

// Closed-form rho = f'/g' ratios from the proofs of the piecewise lemmas.
// lambda below is ln(2 e^3 / 9).

/// rho for f = e^lambda P(Z >= x), g = e^{-x^2/2}:  e^lambda / (x sqrt(2 pi)).
double rho_lemma_v(double x);

/// rho for f = P(Z >= x - lambda/x), g = e^{-x^2/2}, and its derivative.
/// Restricted to x >= 0.05 (e^{lambda^2/(2x^2)} overflows below).
double rho_lemma_w(double x);
double rho_prime_lemma_w(double x);

/// rho for f = P(Z >= x - lambda/x), g = e^lambda P(Z >= x), and derivative.
double rho_lemma_less(double x);
double rho_prime_lemma_less(double x);

/// rho' for f = P(|Z| >= x - lambda/x), g = 1/x^2, on (sqrt(lambda), inf).
double rho_prime_w_tilde(double x);

/// Classifies func on (a, b) from grid_size log-spaced samples.  Differences
/// are taken on the log scale where the function is positive, with absolute
/// tolerance 1e-12 on their signs.  When UpDown, the switch point is refined
/// by ternary search between the grid neighbours of the argmax.
PatternReport check_pattern(const std::function<double(double)>& func,
                            double a, double b, std::size_t grid_size,
                            bool log_spaced = true);

/// Runs the rule end to end on one case: checks f(b-) and g(b-), classifies
/// rho (premise) and r = f/g (conclusion).  If the premise fails, the
/// conclusion is reported but conclusion_ok is left false.
LHopitalReport verify_lhopital_case(const RatioCase& c, std::size_t grid_size);

// The four cases used by the piecewise-form proofs.
RatioCase lemma_v_case();
RatioCase lemma_w_case();
RatioCase lemma_less_case();
RatioCase w_tilde_case();

}  // namespace tailbound
