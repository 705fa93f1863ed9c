#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tailbound/bounds.hpp"

namespace tailbound {

/// Raised when an exact computation would exceed its enumeration budget.
class CapacityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Coefficient sequence (a_i) with sum of squares 1; the constructor
/// renormalizes the input.
class WeightVector {
  public:
    explicit WeightVector(std::vector<double> a);
    const std::vector<double>& weights() const { return a_; }
    std::size_t size() const { return a_.size(); }

  private:
    std::vector<double> a_;
};

/// Finite zero-mean law with support in [-1, 1].
struct DiscreteZeroMeanDistribution {
    std::vector<double> support;
    std::vector<double> probs;

    /// Validates and normalizes: probs are scaled to sum 1, then the zero
    /// mean and support range invariants are checked to 1e-12.
    static DiscreteZeroMeanDistribution make(std::vector<double> support,
                                             std::vector<double> probs);
    static DiscreteZeroMeanDistribution rademacher();
    /// Two-point law on {u, -v} with the zero-mean probability p = v/(u+v).
    static DiscreteZeroMeanDistribution two_point(double u, double v);
};

/// History-dependent martingale-difference construction.  At step i the
/// rule maps the realized sign history (bit j set = upper branch at step j)
/// to a two-point law on {u, -v}, u, v in (0, 1]; the conditional zero mean
/// fixes p = v/(u+v).  The difference is X_i = a_i * eta_i.
struct MartingaleSpec {
    WeightVector a;
    std::function<std::pair<double, double>(std::size_t step,
                                            std::uint64_t history)> rule;
};

/// Deterministic two-point rule family keyed by a seed; used by instance
/// files and the test harness.
MartingaleSpec make_seeded_martingale(WeightVector a, std::uint64_t rule_seed);

/// Vectors x_i in R^d with sum ||x_i||^2 = 1 (renormalized on construction)
/// and one scalar law per i.
struct HilbertInstance {
    std::vector<std::vector<double>> vectors;
    std::vector<DiscreteZeroMeanDistribution> dists;

    static HilbertInstance make(std::vector<std::vector<double>> vectors,
                                std::vector<DiscreteZeroMeanDistribution> d);
};

// Outcomes with sum >= x - kAtomTol are counted as tail mass, so atom
// collisions err toward over-counting the tail (violations are reported,
// never hidden).
inline constexpr double kAtomTol = 1e-9;

/// Exact P(S >= x) (or P(|S| >= x)) for Rademacher signs by full 2^n
/// enumeration; n <= 25.
double exact_rademacher_tail(const WeightVector& w, double x, bool two_sided);

/// Same value via meet-in-the-middle (two sorted half-sum tables and
/// counting); n <= 46.
double exact_rademacher_tail_mitm(const WeightVector& w, double x,
                                  bool two_sided);

/// Reusable meet-in-the-middle table for many x queries on one instance.
class RademacherMitm {
  public:
    explicit RademacherMitm(const WeightVector& w);
    double tail(double x, bool two_sided) const;

  private:
    std::vector<double> lo_sums_;  // sorted
    std::vector<double> hi_sums_;  // sorted
    std::size_t n_;
};

/// Exact tail of sum a_i eta_i for independent finite-support laws, by
/// iterated sparse convolution (atoms within 1e-12 merged).  The product of
/// support sizes must not exceed 1e7.
double exact_bounded_sum_tail(const WeightVector& w,
                              const std::vector<DiscreteZeroMeanDistribution>& dists,
                              double x, bool two_sided);

/// Full convolved law of sum a_i eta_i (sorted atoms), for multi-x queries.
std::vector<std::pair<double, double>> convolve_bounded_sum(
    const WeightVector& w,
    const std::vector<DiscreteZeroMeanDistribution>& dists);

double tail_of_law(const std::vector<std::pair<double, double>>& law, double x,
                   bool two_sided);

// Monte Carlo.  Sampling is split into fixed-size chunks with per-chunk
// substreams derived from (seed, chunk index), so results are bit-identical
// regardless of the worker count (TAILBOUND_THREADS or hardware default).

inline constexpr double kMcDelta = 1e-6;

/// One-sided Hoeffding confidence allowance sqrt(ln(1/delta) / (2 n)).
double mc_margin(std::size_t samples);

/// Final sums S_n for `samples` simulated martingale paths.
std::vector<double> mc_martingale_samples(const MartingaleSpec& spec,
                                          std::size_t samples,
                                          std::uint64_t seed);

/// Empirical P(S_n >= x) with its margin; samples >= 1e4.
std::pair<double, double> mc_martingale_tail(const MartingaleSpec& spec,
                                             double x, std::size_t samples,
                                             std::uint64_t seed);

/// Norms ||sum eta_i x_i|| for `samples` simulated draws.
std::vector<double> mc_hilbert_samples(const HilbertInstance& inst,
                                       std::size_t samples,
                                       std::uint64_t seed);

/// Empirical P(||sum eta_i x_i|| >= x) with margin; samples >= 1e4.
std::pair<double, double> mc_hilbert_tail(const HilbertInstance& inst,
                                          double x, std::size_t samples,
                                          std::uint64_t seed);

/// One verification row: a tail estimate against each requested bound.
struct VerificationRow {
    double x = 0.0;
    double tail = 0.0;
    double margin = 0.0;            // 0 for exact tails
    std::vector<double> bounds;     // parallel to VerificationReport::kinds
    bool violation = false;         // tail - margin > bound + 1e-9 for some bound
};

struct VerificationReport {
    std::vector<BoundKind> kinds;
    std::vector<VerificationRow> rows;
    bool any_violation = false;
};

inline constexpr double kViolationSlack = 1e-9;

/// Evaluates tail_source (returning {tail, margin}) on the grid against the
/// requested bounds.  One-sided tails pair with {Hoeffding, V, W,
/// Edelman15}, two-sided tails with {Markov2, Wtilde}; a mismatch is a
/// usage error (std::invalid_argument).
VerificationReport verify_instance(
    const std::function<std::pair<double, double>(double)>& tail_source,
    bool two_sided, const std::vector<BoundKind>& kinds,
    const std::vector<double>& x_grid);

}  // namespace tailbound
