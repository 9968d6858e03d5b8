#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <elicit/distribution.hpp>
#include <elicit/errors.hpp>
#include <elicit/scoring.hpp>
#include <elicit/weight.hpp>

#include "generators.hpp"
#include "oracles.hpp"

using elicit::CrpsMethod;
using elicit::DiscreteDistribution;
using elicit::Error;
using elicit::ErrorCode;
using elicit::RawAtom;
using elicit::ScoreEntry;
using elicit::ScoreSeries;
using elicit::ScoreValue;
using elicit::ThresholdWeight;

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

ScoreSeries constant_series(std::vector<double> scores) {
    std::vector<ScoreEntry> entries;
    entries.reserve(scores.size());
    for (double s : scores) entries.push_back({ScoreValue(s), 0.0});
    return ScoreSeries(std::move(entries));
}

}  // namespace

TEST_CASE("score values live in (-inf, +inf]") {
    CHECK(ScoreValue(1.5).raw() == 1.5);
    CHECK(ScoreValue::infinity().is_infinite());
    CHECK(!ScoreValue(0.0).is_infinite());
    CHECK(code_of([] { ScoreValue(std::numeric_limits<double>::quiet_NaN()); }) ==
          ErrorCode::NonFiniteValue);
    CHECK(code_of([] { ScoreValue(-std::numeric_limits<double>::infinity()); }) ==
          ErrorCode::NonFiniteValue);
}

TEST_CASE("point-forecast scores reduce to absolute error") {
    CHECK(elicit::crps(DiscreteDistribution::point_mass(2.0), 5.0).raw() == 3.0);
    CHECK(elicit::crps(DiscreteDistribution::point_mass(2.0), 5.0, CrpsMethod::threshold)
              .raw() == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(elicit::crps(DiscreteDistribution::point_mass(-4.0), -4.0).raw() == 0.0);
}

TEST_CASE("both representations give the textbook Bernoulli value") {
    const auto b = bernoulli();
    CHECK(elicit::crps(b, 0.0).raw() == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(elicit::crps(b, 0.0, CrpsMethod::threshold).raw() ==
          doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("representations and the quadratic oracle agree on random inputs") {
    gen::Rng rng(301);
    for (int trial = 0; trial < 1500; ++trial) {
        const auto f = gen::random_distribution(rng, 64, -10.0, 10.0);
        double y = rng.uniform(-12.0, 12.0);
        if (rng.u01() < 0.4) y = f.values()[rng.index(f.size())];
        const double energy = elicit::crps(f, y, CrpsMethod::energy).raw();
        const double threshold = elicit::crps(f, y, CrpsMethod::threshold).raw();
        CHECK(std::abs(energy - threshold) <= 1e-10);
        CHECK(std::abs(energy - oracles::crps_pairwise(f, y)) <= 1e-12);
        CHECK(energy >= 0.0);
    }
}

TEST_CASE("threshold weighting restricts the integration range") {
    const auto b = bernoulli();
    CHECK(elicit::twcrps(b, 0.0, ThresholdWeight::indicator(
                                     0.5, std::numeric_limits<double>::infinity()))
              .raw() == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(elicit::twcrps(b, 0.0, ThresholdWeight::constant_one()).raw() ==
          doctest::Approx(elicit::crps(b, 0.0).raw()).epsilon(1e-12));
    CHECK(elicit::twcrps(DiscreteDistribution::point_mass(1.0), 1.0,
                         ThresholdWeight::constant_one())
              .raw() == 0.0);
}

TEST_CASE("unweighted reduction holds on random inputs") {
    gen::Rng rng(302);
    for (int trial = 0; trial < 400; ++trial) {
        const auto f = gen::random_distribution(rng, 32, -10.0, 10.0);
        const double y = rng.uniform(-11.0, 11.0);
        CHECK(std::abs(elicit::twcrps(f, y, ThresholdWeight::constant_one()).raw() -
                       elicit::crps(f, y).raw()) <= 1e-12);
        const double lo = rng.uniform(-11.0, 0.0);
        const double hi = lo + rng.uniform(0.0, 12.0);
        const double banded =
            elicit::twcrps(f, y, ThresholdWeight::indicator(lo, hi)).raw();
        CHECK(banded >= 0.0);
        CHECK(banded <= elicit::crps(f, y).raw() + 1e-12);
    }
}

TEST_CASE("a threshold weight must carry its antiderivative") {
    ThresholdWeight incomplete;
    incomplete.evaluate = [](double) { return 1.0; };
    CHECK(code_of([&] { elicit::twcrps(bernoulli(), 0.0, incomplete); }) ==
          ErrorCode::InvalidWeight);
}

TEST_CASE("quantile-grid discretization approaches the exact score") {
    CHECK(elicit::crps_quantile_numeric(bernoulli(), 0.0, 100000).raw() ==
          doctest::Approx(0.25).epsilon(4e-4));
    CHECK(elicit::crps_quantile_numeric(DiscreteDistribution::point_mass(3.0), 3.0, 64)
              .raw() == 0.0);
    CHECK(std::abs(elicit::crps_quantile_numeric(u4(), 2.0, 100000).raw() -
                   elicit::crps(u4(), 2.0).raw()) <= 1e-3);
    CHECK(code_of([] { elicit::crps_quantile_numeric(u4(), 2.0, 8); }) ==
          ErrorCode::InvalidParameter);
}

TEST_CASE("log score is the negative log point mass") {
    const auto f = DiscreteDistribution::canonicalize({RawAtom{0.0, 0.25}, RawAtom{1.0, 0.75}});
    CHECK(elicit::log_score(f, 0.0).raw() == doctest::Approx(std::log(4.0)).epsilon(1e-14));
    CHECK(elicit::log_score(DiscreteDistribution::point_mass(2.0), 2.0).raw() == 0.0);
    CHECK(elicit::log_score(DiscreteDistribution::point_mass(0.0), 1.0).is_infinite());
}

TEST_CASE("expected scores integrate against the truth") {
    const auto b = bernoulli();
    CHECK(elicit::expected_score(elicit::rule::crps(), b, b).raw() ==
          doctest::Approx(0.25).epsilon(1e-13));
    CHECK(elicit::expected_score(elicit::rule::crps(),
                                 DiscreteDistribution::point_mass(0.0),
                                 DiscreteDistribution::point_mass(0.0))
              .raw() == 0.0);

    const auto q = DiscreteDistribution::canonicalize({RawAtom{0.0, 0.25}, RawAtom{1.0, 0.75}});
    const double entropy = -(0.25 * std::log(0.25) + 0.75 * std::log(0.75));
    CHECK(elicit::expected_score(elicit::rule::log_score(), q, q).raw() ==
          doctest::Approx(entropy).epsilon(1e-13));

    // Zero-mass outcome under the forecast: the expectation is infinite.
    CHECK(elicit::expected_score(elicit::rule::log_score(),
                                 DiscreteDistribution::point_mass(0.0), b)
              .is_infinite());
}

TEST_CASE("score series map forecasts against observations in order") {
    std::vector<DiscreteDistribution> forecasts = {DiscreteDistribution::point_mass(1.0),
                                                   DiscreteDistribution::point_mass(2.0)};
    const std::vector<double> obs = {1.0, 5.0};
    const auto series = elicit::score_series(elicit::rule::crps(), forecasts, obs);
    REQUIRE(series.size() == 2);
    CHECK(series.entries()[0].score.raw() == 0.0);
    CHECK(series.entries()[1].score.raw() == 3.0);
    CHECK(series.entries()[0].observation == 1.0);
    CHECK(series.entries()[1].observation == 5.0);
    CHECK(series.mean().raw() == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(series.infinite_count() == 0);

    const std::vector<double> short_obs = {1.0};
    CHECK(code_of([&] {
              elicit::score_series(elicit::rule::crps(), forecasts, short_obs);
          }) == ErrorCode::LengthMismatch);
}

TEST_CASE("an infinite entry makes the series mean infinite") {
    std::vector<DiscreteDistribution> forecasts = {DiscreteDistribution::point_mass(0.0)};
    const std::vector<double> obs = {1.0};
    const auto series = elicit::score_series(elicit::rule::log_score(), forecasts, obs);
    REQUIRE(series.size() == 1);
    CHECK(series.entries()[0].score.is_infinite());
    CHECK(series.mean().is_infinite());
    CHECK(series.infinite_count() == 1);
}

TEST_CASE("a single-entry series has its score as mean") {
    const auto series = constant_series({2.25});
    CHECK(series.mean().raw() == 2.25);
}

TEST_CASE("identical series compare as a dead heat") {
    const auto a = constant_series({1.0, 2.0, 3.0, 4.0});
    const auto dm = elicit::diebold_mariano(a, a, 0);
    CHECK(dm.statistic == 0.0);
    CHECK(dm.p_value == 1.0);
}

TEST_CASE("an alternating differential with zero mean is a dead heat") {
    const auto a = constant_series({1.0, 0.0, 1.0, 0.0, 1.0, 0.0});
    const auto b = constant_series({0.0, 1.0, 0.0, 1.0, 0.0, 1.0});
    const auto dm = elicit::diebold_mariano(a, b, 0);
    CHECK(dm.statistic == 0.0);
    CHECK(dm.p_value == 1.0);
}

TEST_CASE("a constant nonzero differential is categorical") {
    const auto a = constant_series({2.0, 2.0, 2.0});
    const auto b = constant_series({1.0, 1.0, 1.0});
    const auto dm = elicit::diebold_mariano(a, b, 0);
    CHECK(dm.statistic == std::numeric_limits<double>::infinity());
    CHECK(dm.p_value == 0.0);
    const auto swapped = elicit::diebold_mariano(b, a, 0);
    CHECK(swapped.statistic == -std::numeric_limits<double>::infinity());
    CHECK(swapped.p_value == 0.0);
}

TEST_CASE("the Bartlett variance reproduces a hand-computed statistic") {
    // d = (1,2,3,4): mean 2.5, gamma0 = 1.25, gamma1 = 0.3125, so the
    // lag-1 long-run variance is 1.5625 and the statistic 2.5/sqrt(...) = 4.
    const auto a = constant_series({1.0, 2.0, 3.0, 4.0});
    const auto b = constant_series({0.0, 0.0, 0.0, 0.0});
    const auto dm = elicit::diebold_mariano(a, b, 1);
    CHECK(dm.statistic == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(dm.p_value == doctest::Approx(std::erfc(4.0 / std::sqrt(2.0))).epsilon(1e-12));

    const auto plain = elicit::diebold_mariano(a, b, 0);
    // gamma0 = 1.25 => statistic 2.5 / sqrt(1.25/4).
    CHECK(plain.statistic ==
          doctest::Approx(2.5 / std::sqrt(1.25 / 4.0)).epsilon(1e-12));
}

TEST_CASE("comparison swaps negate the statistic and keep the p-value") {
    gen::Rng rng(303);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 8 + rng.index(64);
        std::vector<double> sa(n);
        std::vector<double> sb(n);
        for (std::size_t i = 0; i < n; ++i) {
            sa[i] = rng.uniform(0.0, 3.0);
            sb[i] = rng.uniform(0.0, 3.0);
        }
        const auto a = constant_series(sa);
        const auto b = constant_series(sb);
        const std::size_t lag = rng.index(4);
        const auto ab = elicit::diebold_mariano(a, b, lag);
        const auto ba = elicit::diebold_mariano(b, a, lag);
        CHECK(ab.statistic == -ba.statistic);
        CHECK(ab.p_value == ba.p_value);
        CHECK(ab.p_value >= 0.0);
        CHECK(ab.p_value <= 1.0);
    }
}

TEST_CASE("comparison preconditions are enforced") {
    const auto a = constant_series({1.0, 2.0, 3.0});
    const auto b = constant_series({1.0, 2.0});
    CHECK(code_of([&] { elicit::diebold_mariano(a, b, 0); }) == ErrorCode::LengthMismatch);

    const auto one = constant_series({1.0});
    CHECK(code_of([&] { elicit::diebold_mariano(one, one, 0); }) ==
          ErrorCode::DegenerateSeries);

    const auto c = constant_series({1.0, 2.0, 3.0});
    CHECK(code_of([&] { elicit::diebold_mariano(a, c, 3); }) == ErrorCode::InvalidParameter);

    std::vector<ScoreEntry> with_inf = {{ScoreValue(1.0), 0.0},
                                        {ScoreValue::infinity(), 0.0},
                                        {ScoreValue(2.0), 0.0}};
    const ScoreSeries inf_series(std::move(with_inf));
    CHECK(code_of([&] { elicit::diebold_mariano(inf_series, c, 0); }) ==
          ErrorCode::InfiniteScore);
}

TEST_CASE("scoring the truth is never beaten under the ranked probability score") {
    gen::Rng rng(304);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto p = gen::random_distribution(rng, 32, -10.0, 10.0);
        const auto q = gen::random_distribution(rng, 32, -10.0, 10.0);
        const double at_q = elicit::expected_score(elicit::rule::crps(), q, q).raw();
        const double at_p = elicit::expected_score(elicit::rule::crps(), p, q).raw();
        CHECK(at_q <= at_p + 1e-12);
    }
}
