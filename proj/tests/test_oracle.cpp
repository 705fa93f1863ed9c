#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "tailbound/bounds.hpp"
#include "tailbound/constants.hpp"
#include "tailbound/normal.hpp"
#include "tailbound/oracle.hpp"

using namespace tailbound;

namespace {

WeightVector random_weights(std::mt19937_64& eng, std::size_t n) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> a(n);
    for (double& v : a) {
        do {
            v = d(eng);
        } while (v == 0.0);
    }
    return WeightVector(a);
}

}  // namespace

TEST_CASE("WeightVector normalizes") {
    const WeightVector w({3.0, 4.0});
    double ss = 0.0;
    for (const double v : w.weights()) ss += v * v;
    CHECK(std::fabs(ss - 1.0) <= 1e-12);
    CHECK(w.weights()[0] == doctest::Approx(0.6));
    CHECK_THROWS_AS(WeightVector(std::vector<double>{}),
                    std::invalid_argument);
    CHECK_THROWS_AS(WeightVector({0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(WeightVector({1.0, std::nan("")}), std::invalid_argument);
    // zero entries permitted
    CHECK(WeightVector({1.0, 0.0}).weights()[1] == 0.0);
}

TEST_CASE("DiscreteZeroMeanDistribution validation") {
    const auto r = DiscreteZeroMeanDistribution::rademacher();
    CHECK(r.support.size() == 2);
    const auto tp = DiscreteZeroMeanDistribution::two_point(0.5, 0.25);
    double mean = 0.0;
    for (std::size_t i = 0; i < tp.support.size(); ++i) {
        mean += tp.support[i] * tp.probs[i];
    }
    CHECK(std::fabs(mean) <= 1e-12);
    CHECK_THROWS_AS(DiscreteZeroMeanDistribution::make({0.5, -0.5}, {0.7, 0.2}),
                    std::invalid_argument);  // nonzero mean
    CHECK_THROWS_AS(DiscreteZeroMeanDistribution::make({1.5, -1.5}, {0.5, 0.5}),
                    std::invalid_argument);  // support outside [-1, 1]
    CHECK_THROWS_AS(DiscreteZeroMeanDistribution::make({1.0}, {0.5, 0.5}),
                    std::invalid_argument);  // size mismatch
    CHECK_THROWS_AS(DiscreteZeroMeanDistribution::two_point(0.0, 0.5),
                    std::invalid_argument);
}

TEST_CASE("exact Rademacher enumeration examples") {
    CHECK(exact_rademacher_tail(WeightVector({1.0}), 1.0, false) == 0.5);
    const double s = 1.0 / std::sqrt(2.0);
    const WeightVector w({s, s});
    CHECK(exact_rademacher_tail(w, std::sqrt(2.0), false) == 0.25);
    CHECK(exact_rademacher_tail(w, std::sqrt(2.0), true) == 0.5);
    CHECK(exact_rademacher_tail(w, 1e-9, false) <= 1.0);
    CHECK_THROWS_AS(exact_rademacher_tail(WeightVector(std::vector<double>(26, 1.0)),
                                          1.0, false),
                    CapacityError);
    CHECK_THROWS_AS(exact_rademacher_tail_mitm(
                        WeightVector(std::vector<double>(47, 1.0)), 1.0, false),
                    CapacityError);
}

TEST_CASE("MITM equals direct enumeration") {
    std::mt19937_64 eng(12345);
    std::uniform_int_distribution<std::size_t> nd(1, 18);
    std::uniform_real_distribution<double> xd(0.0, 4.0);
    for (int inst = 0; inst < 50; ++inst) {
        const WeightVector w = random_weights(eng, nd(eng));
        const RademacherMitm mitm(w);
        for (int q = 0; q < 5; ++q) {
            const double x = xd(eng);
            const bool two = (q % 2) == 0;
            CAPTURE(inst);
            CAPTURE(x);
            CHECK(std::fabs(mitm.tail(x, two) -
                            exact_rademacher_tail(w, x, two)) <= 1e-12);
        }
    }
}

TEST_CASE("uniform n = 30 tail at 0 matches the binomial identity") {
    const WeightVector w(std::vector<double>(30, 1.0));
    CHECK(std::fabs(exact_rademacher_tail_mitm(w, 0.0, false) -
                    0.57223222404718399) <= 1e-12);
}

TEST_CASE("uniform n = 40 tail at 2 sits inside the bounds") {
    const WeightVector w(std::vector<double>(40, 1.0));
    const double tail = exact_rademacher_tail_mitm(w, 2.0, false);
    CHECK(tail > 0.0);
    CHECK(tail < hoeffding_bound(2.0));
    CHECK(tail < w_bound(2.0));
}

TEST_CASE("convolution reduces to Rademacher enumeration") {
    std::mt19937_64 eng(777);
    for (int inst = 0; inst < 20; ++inst) {
        const WeightVector w = random_weights(eng, 1 + inst % 10);
        const std::vector<DiscreteZeroMeanDistribution> dists(
            w.size(), DiscreteZeroMeanDistribution::rademacher());
        std::uniform_real_distribution<double> xd(0.0, 3.0);
        for (int q = 0; q < 4; ++q) {
            const double x = xd(eng);
            CHECK(std::fabs(exact_bounded_sum_tail(w, dists, x, false) -
                            exact_rademacher_tail(w, x, false)) <= 1e-12);
        }
    }
}

TEST_CASE("single bounded variable") {
    const WeightVector w({1.0});
    const auto d = DiscreteZeroMeanDistribution::make({-1.0, 1.0 / 3.0},
                                                      {0.25, 0.75});
    CHECK(exact_bounded_sum_tail(w, {d}, 1.0 / 3.0, false) ==
          doctest::Approx(0.75).epsilon(1e-14));
    CHECK(exact_bounded_sum_tail(w, {d}, 1e-9, false) <= 1.0);
}

TEST_CASE("convolution capacity guard") {
    const WeightVector w(std::vector<double>(25, 1.0));
    std::vector<double> sup{-1.0, -0.5, 0.0, 0.5, 1.0};
    std::vector<double> pr(5, 0.2);
    const auto d = DiscreteZeroMeanDistribution::make(sup, pr);
    const std::vector<DiscreteZeroMeanDistribution> dists(25, d);
    CHECK_THROWS_AS(exact_bounded_sum_tail(w, dists, 1.0, false),
                    CapacityError);
}

TEST_CASE("exact tails are nonincreasing in x") {
    std::mt19937_64 eng(99);
    const WeightVector w = random_weights(eng, 12);
    const RademacherMitm mitm(w);
    for (const bool two : {false, true}) {
        double prev = 2.0;
        for (int i = 1; i <= 100; ++i) {
            const double tail = mitm.tail(0.04 * i, two);
            CHECK(tail <= prev + 1e-15);
            prev = tail;
        }
    }
}

TEST_CASE("MC margin arithmetic") {
    CHECK(mc_margin(1000000) == doctest::Approx(0.0026283).epsilon(1e-4));
}

TEST_CASE("history-independent martingale matches the convolution oracle") {
    std::mt19937_64 eng(4242);
    const WeightVector w = random_weights(eng, 6);
    MartingaleSpec spec{w, [](std::size_t, std::uint64_t) {
                            return std::make_pair(0.8, 0.4);
                        }};
    const std::vector<DiscreteZeroMeanDistribution> dists(
        6, DiscreteZeroMeanDistribution::two_point(0.8, 0.4));
    const std::size_t samples = 200000;
    const double margin = mc_margin(samples);
    for (const double x : {0.3, 0.8, 1.4, 2.0}) {
        const auto [est, m] = mc_martingale_tail(spec, x, samples, 7);
        const double exact = exact_bounded_sum_tail(w, dists, x, false);
        CAPTURE(x);
        CHECK(std::fabs(est - exact) <= margin);
        CHECK(m == margin);
    }
}

TEST_CASE("MC determinism") {
    std::mt19937_64 eng(5);
    const WeightVector w = random_weights(eng, 8);
    const MartingaleSpec spec = make_seeded_martingale(w, 31337);
    const auto [e1, m1] = mc_martingale_tail(spec, 1.0, 20000, 123);
    const auto [e2, m2] = mc_martingale_tail(spec, 1.0, 20000, 123);
    CHECK(e1 == e2);
    CHECK(mc_martingale_samples(spec, 20000, 123) ==
          mc_martingale_samples(spec, 20000, 123));
    CHECK(mc_martingale_samples(spec, 20000, 123) !=
          mc_martingale_samples(spec, 20000, 124));
    CHECK_THROWS_AS(mc_martingale_tail(spec, 1.0, 5000, 1),
                    std::invalid_argument);
}

TEST_CASE("martingale rule validation") {
    const WeightVector w({1.0});
    MartingaleSpec bad{w, [](std::size_t, std::uint64_t) {
                           return std::make_pair(1.5, 0.5);
                       }};
    CHECK_THROWS_AS(mc_martingale_samples(bad, 10000, 1),
                    std::invalid_argument);
}

TEST_CASE("hilbert orthonormal construction") {
    // x_i = a_i e_i with Rademacher signs: the norm is always exactly 1.
    const std::size_t d = 3;
    std::vector<std::vector<double>> vecs(d, std::vector<double>(d, 0.0));
    vecs[0][0] = 0.5;
    vecs[1][1] = 0.5;
    vecs[2][2] = std::sqrt(0.5);
    const auto inst = HilbertInstance::make(
        vecs, std::vector<DiscreteZeroMeanDistribution>(
                  d, DiscreteZeroMeanDistribution::rademacher()));
    const auto [t09, m09] = mc_hilbert_tail(inst, 0.9, 10000, 3);
    CHECK(t09 == 1.0);
    const auto [t11, m11] = mc_hilbert_tail(inst, 1.1, 10000, 3);
    CHECK(t11 == 0.0);
    CHECK(w_tilde_bound(1.1) >= 0.0);
}

TEST_CASE("hilbert d = 1 reduces to the absolute value") {
    const auto inst = HilbertInstance::make(
        {{1.0}}, {DiscreteZeroMeanDistribution::rademacher()});
    const auto [t, m] = mc_hilbert_tail(inst, 0.5, 10000, 9);
    CHECK(t == 1.0);  // |eta| = 1 always
}

TEST_CASE("verify_instance") {
    const WeightVector w(std::vector<double>(10, 1.0));
    const RademacherMitm mitm(w);
    auto tail = [&mitm](double x) {
        return std::make_pair(mitm.tail(x, false), 0.0);
    };
    std::vector<double> grid;
    for (int i = 1; i <= 32; ++i) grid.push_back(3.2 * i / 32.0);
    const auto rep = verify_instance(
        tail, false, {BoundKind::Hoeffding, BoundKind::W, BoundKind::Edelman15},
        grid);
    CHECK(!rep.any_violation);
    CHECK(rep.rows.size() == grid.size());
    // Edelman column dominates W's Gaussian branch column
    for (const auto& row : rep.rows) {
        CHECK(row.bounds[2] + 1e-15 >= upper_tail(row.x - kLambda / row.x));
    }
    // fabricated excess tail trips the violation flag
    auto bogus = [](double x) { return std::make_pair(w_bound(x) + 0.01, 0.0); };
    CHECK(verify_instance(bogus, false, {BoundKind::W}, grid).any_violation);
    // mismatched pairing is a usage error
    CHECK_THROWS_AS(verify_instance(tail, false, {BoundKind::Wtilde}, grid),
                    std::invalid_argument);
    CHECK_THROWS_AS(verify_instance(tail, true, {BoundKind::W}, grid),
                    std::invalid_argument);
}

TEST_CASE("random instances never violate the bounds") {
    std::mt19937_64 eng(2024);
    std::uniform_real_distribution<double> xd(0.05, 4.0);
    for (std::size_t n = 1; n <= 14; ++n) {
        for (int inst = 0; inst < 10; ++inst) {
            const WeightVector w = random_weights(eng, n);
            const RademacherMitm mitm(w);
            for (int q = 0; q < 16; ++q) {
                const double x = xd(eng);
                const double one = mitm.tail(x, false);
                const double two = mitm.tail(x, true);
                CAPTURE(n);
                CAPTURE(x);
                CHECK(one <= hoeffding_bound(x) + 1e-9);
                CHECK(one <= v_bound(x) + 1e-9);
                CHECK(one <= w_bound(x) + 1e-9);
                CHECK(one <= edelman_bound(x) + 1e-9);
                CHECK(two <= w_tilde_bound(x) + 1e-9);
                CHECK(two <= markov_two_sided(x) + 1e-9);
            }
        }
    }
}

TEST_CASE("tightness witness at n = 1") {
    const WeightVector w({1.0});
    const double x = 1.0 - 1e-6;
    const double tail = exact_rademacher_tail(w, x, false);
    CHECK(tail == 0.5);
    CHECK(w_bound(x) - tail < 0.11);
}
