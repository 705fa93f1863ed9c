#include "tailbound/monotonicity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tailbound/bounds.hpp"
#include "tailbound/constants.hpp"
#include "tailbound/normal.hpp"

namespace tailbound {

namespace {

constexpr double kSignTol = 1e-12;

void require_min(double x, double lo, const char* what) {
    if (!(x >= lo)) {
        throw std::domain_error(std::string(what) + ": argument out of range");
    }
}

std::vector<double> make_grid(double a, double b, std::size_t m,
                              bool log_spaced) {
    std::vector<double> g(m);
    if (log_spaced) {
        const double la = std::log(a), lb = std::log(b);
        for (std::size_t i = 0; i < m; ++i) {
            g[i] = std::exp(la + (lb - la) * (i + 0.5) / m);
        }
    } else {
        for (std::size_t i = 0; i < m; ++i) {
            g[i] = a + (b - a) * (i + 0.5) / m;
        }
    }
    return g;
}

}  // namespace

std::string pattern_name(Pattern p) {
    switch (p) {
        case Pattern::Decreasing: return "decreasing";
        case Pattern::UpDown: return "up-down";
        case Pattern::Other: return "other";
    }
    return "?";
}

double rho_lemma_v(double x) {
    if (!(x > 0.0)) throw std::domain_error("rho_lemma_v: x must be > 0");
    return kExpLambda / (x * kSqrtTwoPi);
}

double rho_lemma_w(double x) {
    require_min(x, 0.05, "rho_lemma_w");
    const double lam = kLambda;
    return (lam + x * x) /
           (kSqrtTwoPi * x * x * x * std::exp(lam * lam / (2.0 * x * x) - lam));
}

double rho_prime_lemma_w(double x) {
    require_min(x, 0.05, "rho_prime_lemma_w");
    const double lam = kLambda;
    const double x2 = x * x;
    const double num = lam * lam * lam - (3.0 - lam) * lam * x2 - x2 * x2;
    return num / (kSqrtTwoPi * x2 * x2 * x2 *
                  std::exp(lam * lam / (2.0 * x2) - lam));
}

double rho_lemma_less(double x) {
    require_min(x, 0.05, "rho_lemma_less");
    const double lam = kLambda;
    const double x2 = x * x;
    return std::exp(-lam * lam / (2.0 * x2)) * (1.0 + lam / x2);
}

double rho_prime_lemma_less(double x) {
    require_min(x, 0.05, "rho_prime_lemma_less");
    const double lam = kLambda;
    const double x2 = x * x;
    return (lam * lam - (2.0 - lam) * x2) * lam / (x2 * x2 * x) *
           std::exp(-lam * lam / (2.0 * x2));
}

double rho_prime_w_tilde(double x) {
    if (!(x > kSqrtLambda)) {
        throw std::domain_error("rho_prime_w_tilde: x must be > sqrt(lambda)");
    }
    const double lam = kLambda;
    const double u = 1.0 / (x * x);
    const double bracket =
        lam * lam * lam * u * u * u + (lam + 1.0) * lam * u * u +
        (3.0 - lam) * u - 1.0;
    return bracket * x * x * x * x * phi(x - lam / x);
}

PatternReport check_pattern(const std::function<double(double)>& func,
                            double a, double b, std::size_t grid_size,
                            bool log_spaced) {
    if (grid_size < 100) {
        throw std::invalid_argument("check_pattern: grid_size must be >= 100");
    }
    const std::vector<double> xs = make_grid(a, b, grid_size, log_spaced);
    std::vector<double> vs(xs.size());
    bool all_positive = true;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        vs[i] = func(xs[i]);
        if (!std::isfinite(vs[i])) {
            throw std::runtime_error("check_pattern: non-finite value at x = " +
                                     std::to_string(xs[i]));
        }
        if (vs[i] <= 0.0) all_positive = false;
    }
    // Differences on the log scale where possible: sign tolerance then acts
    // on relative changes and the classification is invariant under
    // positive scaling.
    std::vector<double> ds(vs.size() - 1);
    for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
        ds[i] = all_positive ? std::log(vs[i + 1]) - std::log(vs[i])
                             : vs[i + 1] - vs[i];
    }
    const std::size_t k =
        static_cast<std::size_t>(std::max_element(vs.begin(), vs.end()) -
                                 vs.begin());
    double rise_viol = 0.0, fall_viol = 0.0, max_rise = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (i < k) {
            rise_viol = std::max(rise_viol, -ds[i]);
            max_rise = std::max(max_rise, ds[i]);
        } else {
            fall_viol = std::max(fall_viol, ds[i]);
        }
    }
    PatternReport rep;
    if (max_rise <= kSignTol) {
        rep.detected = Pattern::Decreasing;
        rep.max_violation = std::max(fall_viol, max_rise);
        if (rep.max_violation > kSignTol) rep.detected = Pattern::Other;
        return rep;
    }
    if (rise_viol <= kSignTol && fall_viol <= kSignTol && k > 0 &&
        k + 1 < vs.size()) {
        rep.detected = Pattern::UpDown;
        rep.max_violation = std::max(rise_viol, fall_viol);
        // Refine the argmax between its grid neighbours by ternary search.
        double lo = xs[k - 1], hi = xs[k + 1];
        while (hi - lo > 1e-12) {
            const double m1 = lo + (hi - lo) / 3.0;
            const double m2 = hi - (hi - lo) / 3.0;
            if (func(m1) < func(m2)) {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        rep.switch_point = 0.5 * (lo + hi);
        return rep;
    }
    rep.detected = Pattern::Other;
    rep.max_violation = std::max(rise_viol, fall_viol);
    return rep;
}

LHopitalReport verify_lhopital_case(const RatioCase& c,
                                    std::size_t grid_size) {
    LHopitalReport rep;
    const std::vector<double> edge = make_grid(c.a, c.b, grid_size, true);
    rep.f_at_b = c.f(edge.back());
    rep.g_at_b = c.g(edge.back());
    rep.rho_report = check_pattern(c.rho, c.a, c.b, grid_size, true);
    rep.premise_ok = rep.rho_report.detected == c.expected_rho;
    auto r = [&c](double x) { return c.f(x) / c.g(x); };
    rep.r_report = check_pattern(r, c.a, c.b, grid_size, true);
    const bool r_shape_ok = rep.r_report.detected == Pattern::Decreasing ||
                            rep.r_report.detected == Pattern::UpDown;
    rep.conclusion_ok = rep.premise_ok && r_shape_ok;
    if (c.check_above_one_from) {
        const double from = *c.check_above_one_from + 1e-9;
        const double to = std::min(c.b, 12.0);
        double mn = r(to);
        for (const double x : make_grid(from, to, 2000, false)) {
            mn = std::min(mn, r(x));
        }
        rep.min_r_checked = mn;
        rep.above_one_ok = mn > 1.0;
    }
    return rep;
}

RatioCase lemma_v_case() {
    RatioCase c;
    c.name = "lemma_v";
    c.f = [](double x) { return kExpLambda * upper_tail(x); };
    c.g = [](double x) { return std::exp(-0.5 * x * x); };
    c.rho = rho_lemma_v;
    c.a = 0.05;
    c.b = 38.0;
    c.expected_rho = Pattern::Decreasing;
    return c;
}

RatioCase lemma_w_case() {
    RatioCase c;
    c.name = "lemma_w";
    c.f = [](double x) { return upper_tail(x - kLambda / x); };
    c.g = [](double x) { return std::exp(-0.5 * x * x); };
    c.rho = rho_lemma_w;
    c.a = 0.05;
    c.b = 38.0;
    c.expected_rho = Pattern::UpDown;
    return c;
}

RatioCase lemma_less_case() {
    RatioCase c;
    c.name = "lemma_less";
    c.f = [](double x) { return upper_tail(x - kLambda / x); };
    c.g = [](double x) { return kExpLambda * upper_tail(x); };
    c.rho = rho_lemma_less;
    c.a = 0.05;
    c.b = 38.0;
    c.expected_rho = Pattern::UpDown;
    c.check_above_one_from = solve_crossings().z_v;
    return c;
}

RatioCase w_tilde_case() {
    RatioCase c;
    c.name = "w_tilde";
    c.f = [](double x) { return two_sided_tail(x - kLambda / x); };
    c.g = [](double x) { return 1.0 / (x * x); };
    // rho = f'/g' = (x^3 + lambda x) phi(x - lambda/x); differentiating it
    // gives the rho_prime_w_tilde closed form.
    c.rho = [](double x) {
        return (x * x * x + kLambda * x) * phi(x - kLambda / x);
    };
    c.a = kSqrtLambda + 1e-6;
    c.b = 38.0;
    c.expected_rho = Pattern::UpDown;
    return c;
}

}  // namespace tailbound
