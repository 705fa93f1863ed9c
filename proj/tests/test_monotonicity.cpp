#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "tailbound/bounds.hpp"
#include "tailbound/constants.hpp"
#include "tailbound/monotonicity.hpp"

using namespace tailbound;

TEST_CASE("rho_lemma_v") {
    CHECK(rho_lemma_v(1.0) ==
          doctest::Approx(1.7806599784941475).epsilon(1e-13));
    CHECK(rho_lemma_v(1.3) / rho_lemma_v(2.6) ==
          doctest::Approx(2.0).epsilon(1e-14));
    const PatternReport rep = check_pattern(rho_lemma_v, 0.05, 38.0, 1000);
    CHECK(rep.detected == Pattern::Decreasing);
    CHECK_THROWS_AS(rho_lemma_v(0.0), std::domain_error);
    CHECK_THROWS_AS(rho_lemma_v(-1.0), std::domain_error);
}

TEST_CASE("rho_lemma_w sign change") {
    // positive root of lambda^3 - (3-lambda) lambda x^2 - x^4
    const double xs = 1.0113529545041599;
    CHECK(rho_prime_lemma_w(0.5) > 0.0);
    CHECK(rho_prime_lemma_w(2.0) < 0.0);
    CHECK(rho_prime_lemma_w(xs - 1e-4) > 0.0);
    CHECK(rho_prime_lemma_w(xs + 1e-4) < 0.0);
    CHECK(std::fabs(rho_prime_lemma_w(xs)) < 1e-10);
    CHECK_THROWS_AS(rho_lemma_w(0.01), std::domain_error);
    CHECK_THROWS_AS(rho_prime_lemma_w(0.01), std::domain_error);
}

TEST_CASE("rho_lemma_less") {
    const double root = kLambda / std::sqrt(2.0 - kLambda);
    CHECK(root == doctest::Approx(2.1069804817127293).epsilon(1e-14));
    CHECK(std::fabs(rho_prime_lemma_less(root)) < 1e-14);
    CHECK(rho_prime_lemma_less(root - 0.1) > 0.0);
    CHECK(rho_prime_lemma_less(root + 0.1) < 0.0);
    CHECK(rho_lemma_less(37.0) == doctest::Approx(1.0).epsilon(1e-2));
    // the root is the maximum
    CHECK(rho_lemma_less(root) > rho_lemma_less(root - 0.5));
    CHECK(rho_lemma_less(root) > rho_lemma_less(root + 0.5));
    CHECK(rho_lemma_less(root) > 1.0);
}

TEST_CASE("rho_prime_w_tilde sign change") {
    // unique positive root of lambda^3 u^3 + (lambda+1) lambda u^2
    //   + (3-lambda) u - 1 in u = 1/x^2
    const double xstar = 1.7530973985188408;
    CHECK(rho_prime_w_tilde(1.3) > 0.0);
    CHECK(rho_prime_w_tilde(5.0) < 0.0);
    CHECK(rho_prime_w_tilde(xstar - 1e-4) > 0.0);
    CHECK(rho_prime_w_tilde(xstar + 1e-4) < 0.0);
    CHECK_THROWS_AS(rho_prime_w_tilde(1.0), std::domain_error);
}

TEST_CASE("closed-form rho matches finite-difference f'/g'") {
    const double h = 1e-6;
    for (const RatioCase& c :
         {lemma_v_case(), lemma_w_case(), lemma_less_case(), w_tilde_case()}) {
        CAPTURE(c.name);
        for (double x = std::max(c.a, 0.3); x <= 8.0; x += 0.1) {
            const double fp = (c.f(x + h) - c.f(x - h)) / (2.0 * h);
            const double gp = (c.g(x + h) - c.g(x - h)) / (2.0 * h);
            const double rho = c.rho(x);
            if (std::fabs(rho) < 1e-3) continue;
            CAPTURE(x);
            CHECK(std::fabs(fp / gp - rho) <= 1e-6 * std::fabs(rho));
        }
    }
}

TEST_CASE("check_pattern basics") {
    const auto dec = check_pattern([](double x) { return std::exp(-x); }, 0.01,
                                   5.0, 500);
    CHECK(dec.detected == Pattern::Decreasing);
    const auto ud = check_pattern([](double x) { return x * std::exp(-x); },
                                  0.01, 5.0, 500);
    CHECK(ud.detected == Pattern::UpDown);
    REQUIRE(ud.switch_point.has_value());
    CHECK(std::fabs(*ud.switch_point - 1.0) < 1e-6);
    const auto other = check_pattern([](double x) { return std::sin(3.0 * x); },
                                     0.1, 5.0, 500);
    CHECK(other.detected == Pattern::Other);
    CHECK(other.max_violation > 1e-12);
    CHECK_THROWS_AS(check_pattern([](double) { return 1.0; }, 0.1, 1.0, 50),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        check_pattern([](double x) { return std::log(x - 1.0); }, 0.1, 5.0,
                      500),
        std::runtime_error);
}

TEST_CASE("check_pattern finds the lemma switch points") {
    const auto w = check_pattern(rho_lemma_w, 0.05, 10.0, 2000);
    CHECK(w.detected == Pattern::UpDown);
    REQUIRE(w.switch_point.has_value());
    CHECK(std::fabs(*w.switch_point - 1.0113529545041599) < 1e-6);
    const auto less = check_pattern(rho_lemma_less, 0.05, 38.0, 2000);
    CHECK(less.detected == Pattern::UpDown);
    REQUIRE(less.switch_point.has_value());
    CHECK(std::fabs(*less.switch_point - 2.1069804817127293) < 1e-6);
}

TEST_CASE("pattern detection is scale invariant") {
    auto base = [](double x) { return x * std::exp(-x); };
    const auto r1 = check_pattern(base, 0.01, 5.0, 500);
    const auto r2 = check_pattern([&](double x) { return 7.25e3 * base(x); },
                                  0.01, 5.0, 500);
    CHECK(r1.detected == r2.detected);
    REQUIRE(r1.switch_point.has_value());
    REQUIRE(r2.switch_point.has_value());
    CHECK(std::fabs(*r1.switch_point - *r2.switch_point) < 1e-9);
}

TEST_CASE("verify_lhopital_case on the four proof cases") {
    const CrossingPoints cp = solve_crossings();
    SUBCASE("lemma_v") {
        const auto rep = verify_lhopital_case(lemma_v_case(), 2000);
        CHECK(rep.premise_ok);
        CHECK(rep.rho_report.detected == Pattern::Decreasing);
        CHECK(rep.r_report.detected == Pattern::Decreasing);
        CHECK(rep.conclusion_ok);
        CHECK(rep.f_at_b < 1e-15);
        CHECK(rep.g_at_b < 1e-15);
    }
    SUBCASE("lemma_w") {
        const auto rep = verify_lhopital_case(lemma_w_case(), 2000);
        CHECK(rep.premise_ok);
        CHECK(rep.rho_report.detected == Pattern::UpDown);
        CHECK(rep.r_report.detected == Pattern::UpDown);
        CHECK(rep.conclusion_ok);
    }
    SUBCASE("lemma_less") {
        const RatioCase c = lemma_less_case();
        const auto rep = verify_lhopital_case(c, 2000);
        CHECK(rep.premise_ok);
        CHECK(rep.conclusion_ok);
        CHECK(rep.above_one_ok);
        CHECK(rep.min_r_checked > 1.0);
        // boundary value from the proof
        CHECK(c.f(cp.z_v) / c.g(cp.z_v) ==
              doctest::Approx(1.0209193337250805).epsilon(1e-10));
    }
    SUBCASE("w_tilde") {
        const RatioCase c = w_tilde_case();
        const auto rep = verify_lhopital_case(c, 2000);
        CHECK(rep.premise_ok);
        CHECK(rep.conclusion_ok);
        const double x0 = kSqrtLambda + 1e-9;
        CHECK(c.f(x0) / c.g(x0) == doctest::Approx(kLambda).epsilon(1e-6));
    }
    SUBCASE("lemma_w boundary value r(1)") {
        const RatioCase c = lemma_w_case();
        CHECK(c.f(1.0) / c.g(1.0) ==
              doctest::Approx(1.1376597042519334).epsilon(1e-10));
    }
}
