#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <elicit/distribution.hpp>
#include <elicit/elicitation.hpp>
#include <elicit/errors.hpp>
#include <elicit/functionals.hpp>
#include <elicit/loss.hpp>
#include <elicit/weight.hpp>

#include "generators.hpp"
#include "oracles.hpp"

using elicit::ActionDomain;
using elicit::DiscreteDistribution;
using elicit::Error;
using elicit::ErrorCode;
using elicit::Identification;
using elicit::LossFunction;
using elicit::LossShape;
using elicit::RawAtom;

namespace {

DiscreteDistribution u4() {
    return DiscreteDistribution::canonicalize(
        {RawAtom{1.0, 0.25}, RawAtom{2.0, 0.25}, RawAtom{3.0, 0.25}, RawAtom{4.0, 0.25}});
}

DiscreteDistribution bernoulli() {
    return DiscreteDistribution::canonicalize({RawAtom{0.0, 0.5}, RawAtom{1.0, 0.5}});
}

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an elicit::Error");
    return ErrorCode::EmptyDistribution;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return g;
}

}  // namespace

TEST_CASE("loss catalog evaluates the documented formulas") {
    CHECK(elicit::loss::pinball(0.5)(1.0, 0.0) == 0.5);
    CHECK(elicit::loss::pinball(0.25)(0.0, 2.0) == doctest::Approx(0.5).epsilon(1e-15));

    const auto asym = elicit::loss::asymmetric_squared(0.5);
    for (double a : {-1.0, 0.0, 2.25, 7.0}) {
        for (double y : {-2.0, 0.0, 3.0}) {
            CHECK(asym(a, y) == doctest::Approx(0.5 * (a - y) * (a - y)).epsilon(1e-15));
        }
    }

    const auto p1 = elicit::loss::power_generalized(0.5, 1.0);
    const auto pin = elicit::loss::pinball(0.5);
    for (double a : {-3.0, 0.5, 2.0}) {
        for (double y : {-1.0, 0.5, 4.0}) {
            CHECK(p1(a, y) == doctest::Approx(0.5 * std::abs(a - y)).epsilon(1e-14));
            CHECK(p1(a, y) == doctest::Approx(pin(a, y)).epsilon(1e-14));
        }
    }

    const auto es = elicit::loss::es_ru_loss(0.5);
    CHECK(es(2.0, 4.0) == doctest::Approx(2.0 + 2.0 / 0.5).epsilon(1e-15));
    CHECK(es(2.0, 1.0) == doctest::Approx(2.0).epsilon(1e-15));

    const auto shifted = elicit::loss::shifted_asymmetric_squared(0.3);
    const auto plain = elicit::loss::asymmetric_squared(0.3);
    for (double a : {-1.0, 0.0, 1.5}) {
        for (double y : {-2.0, 0.5, 3.0}) {
            CHECK(shifted(a, y) ==
                  doctest::Approx(plain(a, y) - plain(0.0, y)).epsilon(1e-14));
        }
    }
}

TEST_CASE("loss constructors validate parameters") {
    CHECK(code_of([] { elicit::loss::pinball(0.0); }) == ErrorCode::InvalidLevel);
    CHECK(code_of([] { elicit::loss::pinball(1.0); }) == ErrorCode::InvalidLevel);
    CHECK(code_of([] { elicit::loss::asymmetric_squared(-0.1); }) == ErrorCode::InvalidLevel);
    CHECK(code_of([] { elicit::loss::es_ru_loss(1.0); }) == ErrorCode::InvalidLevel);
    CHECK(code_of([] { elicit::loss::power_generalized(0.5, 0.5); }) ==
          ErrorCode::InvalidExponent);
}

TEST_CASE("make_loss mirrors the JSON loss spec") {
    const auto squared = elicit::make_loss({.kind = "squared"});
    CHECK(squared(3.0, 1.0) == 4.0);
    const auto pin = elicit::make_loss({.kind = "pinball", .alpha = 0.25});
    CHECK(pin.shape() == LossShape::piecewise_linear_in_a);
    const auto asym = elicit::make_loss({.kind = "asymmetric_squared", .tau = 0.7});
    CHECK(asym.shape() == LossShape::smooth_convex_in_a);
    const auto power = elicit::make_loss({.kind = "power_generalized", .tau = 0.5, .p = 2.0});
    CHECK(power(2.0, 0.0) == doctest::Approx(0.5 * 4.0).epsilon(1e-14));
    CHECK(code_of([] { elicit::make_loss({.kind = "no_such_loss"}); }) ==
          ErrorCode::InvalidParameter);
    CHECK(code_of([] { elicit::make_loss({.kind = "pinball"}); }) ==
          ErrorCode::InvalidParameter);
}

TEST_CASE("expected loss accumulates the loss against the law") {
    CHECK(elicit::expected_loss(elicit::loss::squared(), 2.5, u4()) ==
          doctest::Approx(1.25).epsilon(1e-14));
    CHECK(elicit::expected_loss(elicit::loss::pinball(0.5), 0.5, bernoulli()) ==
          doctest::Approx(0.25).epsilon(1e-14));

    const auto point = DiscreteDistribution::point_mass(1.5);
    for (double a : {-2.0, 0.0, 3.25}) {
        CHECK(elicit::expected_loss(elicit::loss::squared(), a, point) ==
              doctest::Approx(elicit::loss::squared()(a, 1.5)).epsilon(1e-15));
        CHECK(elicit::expected_loss(elicit::loss::pinball(0.3), a, point) ==
              doctest::Approx(elicit::loss::pinball(0.3)(a, 1.5)).epsilon(1e-15));
    }
}

TEST_CASE("expected loss respects the action domain and finiteness") {
    const LossFunction bounded("bounded", LossShape::smooth_convex_in_a,
                               [](double a, double y) { return (a - y) * (a - y); },
                               [](double a, double y) { return 2.0 * (a - y); },
                               ActionDomain{0.0, 1.0});
    CHECK(code_of([&] { elicit::expected_loss(bounded, 2.0, u4()); }) ==
          ErrorCode::ActionOutOfDomain);

    const LossFunction exploding("exploding", LossShape::general_continuous,
                                 [](double, double) {
                                     return std::numeric_limits<double>::infinity();
                                 });
    CHECK(code_of([&] { elicit::expected_loss(exploding, 0.0, u4()); }) ==
          ErrorCode::NonFiniteValue);
}

TEST_CASE("squared loss minimizer is the mean with variance as value") {
    const auto mi = elicit::minimizer_interval(elicit::loss::squared(), u4());
    CHECK(mi.t_min == doctest::Approx(2.5).epsilon(1e-10));
    CHECK(mi.t_max == doctest::Approx(2.5).epsilon(1e-10));
    CHECK(mi.bayes_risk == doctest::Approx(1.25).epsilon(1e-12));
}

TEST_CASE("median pinball loss is flat on the whole quantile interval") {
    const auto mi = elicit::minimizer_interval(elicit::loss::pinball(0.5), bernoulli());
    CHECK(mi.t_min == 0.0);
    CHECK(mi.t_max == 1.0);
    CHECK(mi.bayes_risk == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("expected-shortfall loss minimizes on the quantile interval") {
    const auto mi = elicit::minimizer_interval(elicit::loss::es_ru_loss(0.5), u4());
    CHECK(mi.t_min == 2.0);
    CHECK(mi.t_max == 3.0);
    CHECK(mi.bayes_risk == doctest::Approx(3.5).epsilon(1e-12));
}

TEST_CASE("pinball minimizers recover the quantile interval exactly") {
    gen::Rng rng(201);
    for (int trial = 0; trial < 300; ++trial) {
        const auto f = gen::random_distribution(rng, 48, -10.0, 10.0);
        const double alpha = rng.uniform(0.02, 0.98);
        const auto mi = elicit::minimizer_interval(elicit::loss::pinball(alpha), f);
        const auto q = elicit::quantiles(f, alpha);
        CHECK(mi.t_min == q.lower.raw());
        CHECK(mi.t_max == q.upper.raw());
    }
}

TEST_CASE("squared-loss minimizers recover mean and variance") {
    gen::Rng rng(202);
    for (int trial = 0; trial < 200; ++trial) {
        const auto f = gen::random_distribution(rng, 48, -10.0, 10.0);
        const auto mi = elicit::minimizer_interval(elicit::loss::squared(), f);
        const double mean = f.mean();
        const double var = elicit::moment_stats(f).variance;
        CHECK(std::abs(mi.t_min - mean) <= 1e-10 * (1.0 + std::abs(mean)));
        CHECK(std::abs(mi.t_max - mean) <= 1e-10 * (1.0 + std::abs(mean)));
        CHECK(std::abs(mi.bayes_risk - var) <= 1e-10 * (1.0 + var));
    }
}

TEST_CASE("asymmetric squared losses recover expectiles") {
    gen::Rng rng(203);
    for (int trial = 0; trial < 150; ++trial) {
        const auto f = gen::random_distribution(rng, 32, -10.0, 10.0);
        const double tau = rng.uniform(0.05, 0.95);
        const double e = elicit::expectile(f, tau);
        const auto plain =
            elicit::minimizer_interval(elicit::loss::asymmetric_squared(tau), f);
        const auto shifted =
            elicit::minimizer_interval(elicit::loss::shifted_asymmetric_squared(tau), f);
        CHECK(std::abs(plain.t_min - e) <= 1e-9 * (1.0 + std::abs(e)));
        CHECK(std::abs(shifted.t_min - e) <= 1e-9 * (1.0 + std::abs(e)));
    }
}

TEST_CASE("expected-shortfall loss reproduces the tail functional") {
    gen::Rng rng(204);
    for (int trial = 0; trial < 150; ++trial) {
        const auto f = gen::random_distribution(rng, 32, -10.0, 10.0);
        const double alpha = rng.uniform(0.05, 0.95);
        const auto mi = elicit::minimizer_interval(elicit::loss::es_ru_loss(alpha), f);
        const double es = elicit::weighted_quantile_average(
                              f, elicit::WeightFunction::es_upper(alpha))
                              .value();
        CHECK(std::abs(mi.bayes_risk - es) <= 1e-9 * (1.0 + std::abs(es)));
        const auto q = elicit::quantiles(f, alpha);
        CHECK(std::abs(mi.t_min - q.lower.raw()) <= 1e-12 * (1.0 + std::abs(q.lower.raw())));
        CHECK(std::abs(mi.t_max - q.upper.raw()) <= 1e-12 * (1.0 + std::abs(q.upper.raw())));
    }
}

TEST_CASE("generalized quantile losses without derivatives use the search path") {
    const auto square = [](double u) { return u * u; };
    gen::Rng rng(205);
    for (int trial = 0; trial < 30; ++trial) {
        const auto f = gen::random_distribution(rng, 16, -5.0, 5.0);
        const double tau = rng.uniform(0.2, 0.8);
        const auto general = elicit::loss::generalized_quantile(tau, square, square);
        REQUIRE(general.shape() == LossShape::general_continuous);
        const auto mi = elicit::minimizer_interval(general, f);
        const double e = elicit::expectile(f, tau);
        // The derivative-free path reports the value-tolerance sublevel
        // set, whose half width is about sqrt(vtol) for a curved landscape.
        CHECK(std::abs(mi.t_min - e) <= 1e-4 * (1.0 + std::abs(e)));
        CHECK(std::abs(mi.t_max - e) <= 1e-4 * (1.0 + std::abs(e)));
        CHECK(mi.bayes_risk <=
              elicit::expected_loss(elicit::loss::asymmetric_squared(tau), e, f) + 1e-9);
    }
}

TEST_CASE("flat landscapes stretch the search interval to both ends") {
    const auto ramp = [](double u) { return u; };
    const auto general = elicit::loss::generalized_quantile(0.5, ramp, ramp);
    REQUIRE(general.shape() == LossShape::general_continuous);
    const auto mi = elicit::minimizer_interval(general, bernoulli());
    CHECK(std::abs(mi.t_min - 0.0) <= 1e-6);
    CHECK(std::abs(mi.t_max - 1.0) <= 1e-6);
    CHECK(mi.bayes_risk == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("smooth minimization works from a central-difference gradient") {
    const LossFunction quartic("quartic", LossShape::smooth_convex_in_a,
                               [](double a, double y) {
                                   const double d = a - y;
                                   return d * d * d * d;
                               });
    REQUIRE(!quartic.has_grad());
    const auto mi = elicit::minimizer_interval(quartic, u4());
    CHECK(std::abs(mi.t_min - 2.5) <= 1e-7);
    CHECK(mi.t_min == mi.t_max);
}

TEST_CASE("a domain boundary can carry the minimizer") {
    const LossFunction clipped("clipped_squared", LossShape::smooth_convex_in_a,
                               [](double a, double y) { return (a - y) * (a - y); },
                               [](double a, double y) { return 2.0 * (a - y); },
                               ActionDomain{3.0, 5.0});
    const auto mi = elicit::minimizer_interval(clipped, u4());
    CHECK(mi.t_min == 3.0);
    CHECK(mi.t_max == 3.0);
    CHECK(mi.bayes_risk == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("a lying shape tag is caught by the monotonicity sweep") {
    const LossFunction concave("concave", LossShape::smooth_convex_in_a,
                               [](double a, double y) { return -(a - y) * (a - y); },
                               [](double a, double y) { return -2.0 * (a - y); },
                               ActionDomain{-5.0, 5.0});
    CHECK(code_of([&] { elicit::minimizer_interval(concave, u4()); }) ==
          ErrorCode::ShapeViolation);

    // Two wells at a = pi/2 and 3*pi/2, both inside the searched hull
    // [0, 5] of the four-point law.
    const LossFunction two_wells("two_wells", LossShape::general_continuous,
                                 [](double a, double) { return std::cos(2.0 * a); });
    CHECK(code_of([&] { elicit::minimizer_interval(two_wells, u4()); }) ==
          ErrorCode::ShapeViolation);
}

TEST_CASE("an unboundedly decreasing landscape raises Unbracketed") {
    const LossFunction slide("slide", LossShape::smooth_convex_in_a,
                             [](double a, double) { return -a; },
                             [](double, double) { return -1.0; });
    CHECK(code_of([&] { elicit::minimizer_interval(slide, u4()); }) ==
          ErrorCode::Unbracketed);
}

TEST_CASE("expected loss is order sensitive around the minimizer interval") {
    gen::Rng rng(206);
    std::vector<LossFunction> losses;
    losses.push_back(elicit::loss::squared());
    losses.push_back(elicit::loss::pinball(0.35));
    losses.push_back(elicit::loss::asymmetric_squared(0.7));
    losses.push_back(elicit::loss::es_ru_loss(0.6));
    for (int trial = 0; trial < 60; ++trial) {
        const auto f = gen::random_distribution(rng, 24, -8.0, 8.0);
        for (const auto& loss : losses) {
            const auto mi = elicit::minimizer_interval(loss, f);
            const auto left = linspace(f.min_value() - 2.0, mi.t_min, 40);
            for (std::size_t i = 1; i < left.size(); ++i) {
                CHECK(elicit::expected_loss(loss, left[i - 1], f) >=
                      elicit::expected_loss(loss, left[i], f) - 1e-9);
            }
            const auto right = linspace(mi.t_max, f.max_value() + 2.0, 40);
            for (std::size_t i = 1; i < right.size(); ++i) {
                CHECK(elicit::expected_loss(loss, right[i - 1], f) <=
                      elicit::expected_loss(loss, right[i], f) + 1e-9);
            }
        }
    }
}

TEST_CASE("minimizer strictly beats grid points iff they sit above it") {
    gen::Rng rng(207);
    for (int trial = 0; trial < 100; ++trial) {
        const auto f = gen::random_distribution(rng, 24, -8.0, 8.0);
        const double alpha = rng.uniform(0.1, 0.9);
        const auto loss = elicit::loss::pinball(alpha);
        const auto mi = elicit::minimizer_interval(loss, f);
        const double a = rng.uniform(f.min_value() - 2.0, f.max_value() + 2.0);
        const double base = elicit::expected_loss(loss, a, f);
        bool beaten = false;
        const auto grid = linspace(f.min_value() - 1.0, f.max_value() + 1.0, 1024);
        for (double b : grid) {
            if (b > a && base > elicit::expected_loss(loss, b, f)) {
                beaten = true;
                break;
            }
        }
        CHECK((mi.t_min > a) == beaten);
    }
}

TEST_CASE("identification residuals vanish at the elicited values") {
    CHECK(elicit::identification_residual(Identification::mean(), 2.5, u4()) ==
          doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(elicit::identification_residual(Identification::quantile(0.6), 3.0, u4()) ==
          doctest::Approx(0.15).epsilon(1e-13));
    CHECK(elicit::identification_residual(Identification::expectile(0.8), 0.8,
                                          bernoulli()) ==
          doctest::Approx(0.0).scale(1.0).epsilon(1e-13));

    CHECK(code_of([] { Identification::quantile(0.0); }) == ErrorCode::InvalidLevel);
    CHECK(code_of([] { Identification::expectile(1.0); }) == ErrorCode::InvalidLevel);
}

TEST_CASE("identification residuals bracket zero at the functional value") {
    gen::Rng rng(208);
    for (int trial = 0; trial < 200; ++trial) {
        const auto f = gen::random_distribution(rng, 32, -10.0, 10.0);
        const double span = f.max_value() - f.min_value();

        const double mean = f.mean();
        CHECK(std::abs(elicit::identification_residual(Identification::mean(), mean, f)) <=
              1e-10 * (1.0 + span));

        const double tau = rng.uniform(0.05, 0.95);
        const double e = elicit::expectile(f, tau);
        CHECK(std::abs(elicit::identification_residual(Identification::expectile(tau), e,
                                                       f)) <= 1e-10 * (1.0 + span));

        const double alpha = rng.uniform(0.05, 0.95);
        const double q = elicit::quantile_lower(f, alpha);
        const auto probe = f.probe(q);
        CHECK(probe.cdf_left - alpha <= 1e-14);
        CHECK(probe.cdf - alpha >= -1e-14);
    }
}

TEST_CASE("consistency check accepts optima and rejects beaten actions") {
    const auto grid = linspace(-1.0, 6.0, 101);
    CHECK(elicit::consistency_check(elicit::loss::squared(), 2.5, u4(), grid));
    CHECK(!elicit::consistency_check(elicit::loss::squared(), 3.0, u4(), grid));
    const auto unit_grid = linspace(0.0, 1.0, 50);
    CHECK(elicit::consistency_check(elicit::loss::pinball(0.5), 0.7, bernoulli(),
                                    unit_grid));
}
