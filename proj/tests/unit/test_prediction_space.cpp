#include <doctest.h>

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <elicit/distribution.hpp>
#include <elicit/errors.hpp>
#include <elicit/loss.hpp>
#include <elicit/prediction_space.hpp>
#include <elicit/scoring.hpp>

#include "generators.hpp"

using elicit::DiscreteDistribution;
using elicit::Error;
using elicit::ErrorCode;
using elicit::FinitePredictionSpace;
using elicit::Functional;
using elicit::MarkovKernelFinite;
using elicit::Outcome;
using elicit::PointForecast;

namespace {

using PartitionMap = std::map<std::string, std::map<std::string, std::string>>;

FinitePredictionSpace sp4() {
    std::vector<Outcome> outcomes = {{"w1", 0.25, 1.0},
                                     {"w2", 0.25, 2.0},
                                     {"w3", 0.25, 3.0},
                                     {"w4", 0.25, 4.0}};
    PartitionMap partitions = {
        {"G", {{"w1", "c1"}, {"w2", "c1"}, {"w3", "c2"}, {"w4", "c2"}}},
        {"trivial", {{"w1", "all"}, {"w2", "all"}, {"w3", "all"}, {"w4", "all"}}},
        {"singletons", {{"w1", "s1"}, {"w2", "s2"}, {"w3", "s3"}, {"w4", "s4"}}},
    };
    return FinitePredictionSpace::create(std::move(outcomes), std::move(partitions));
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

}  // namespace

TEST_CASE("space construction validates its inputs") {
    CHECK(code_of([] { FinitePredictionSpace::create({}, {}); }) ==
          ErrorCode::EmptyDistribution);
    CHECK(code_of([] {
              FinitePredictionSpace::create({{"a", 0.5, 1.0}, {"a", 0.5, 2.0}}, {});
          }) == ErrorCode::SchemaError);
    CHECK(code_of([] {
              FinitePredictionSpace::create({{"a", 0.5, 1.0}, {"b", 0.0, 2.0}}, {});
          }) == ErrorCode::MassNotNormalized);
    CHECK(code_of([] {
              FinitePredictionSpace::create({{"a", 0.5, 1.0}, {"b", 0.4, 2.0}}, {});
          }) == ErrorCode::MassNotNormalized);
    CHECK(code_of([] {
              FinitePredictionSpace::create({{"a", 1.0, HUGE_VAL}}, {});
          }) == ErrorCode::NonFiniteValue);
    CHECK(code_of([] {
              FinitePredictionSpace::create({{"a", 0.5, 1.0}, {"b", 0.5, 2.0}},
                                            {{"P", {{"a", "c1"}}}});
          }) == ErrorCode::SchemaError);
    CHECK(code_of([] {
              FinitePredictionSpace::create(
                  {{"a", 0.5, 1.0}, {"b", 0.5, 2.0}},
                  {{"P", {{"a", "c1"}, {"b", "c2"}, {"zz", "c3"}}}});
          }) == ErrorCode::SchemaError);
}

TEST_CASE("the unconditional response law aggregates duplicate responses") {
    std::vector<Outcome> outcomes = {
        {"a", 0.25, 2.0}, {"b", 0.25, 1.0}, {"c", 0.5, 2.0}};
    const auto space = FinitePredictionSpace::create(std::move(outcomes), {});
    const auto law = space.response_law();
    REQUIRE(law.size() == 2);
    CHECK(law.values()[0] == 1.0);
    CHECK(law.masses()[0] == 0.25);
    CHECK(law.values()[1] == 2.0);
    CHECK(law.masses()[1] == 0.75);
}

TEST_CASE("conditional kernels restrict and renormalize") {
    const auto space = sp4();
    const auto kernel = elicit::conditional_kernel(space, "G");
    CHECK(kernel.partition == "G");
    REQUIRE(kernel.cell_laws.size() == 2);
    const auto& c1 = kernel.cell_laws.at("c1");
    CHECK(c1.values() == std::vector<double>{1.0, 2.0});
    CHECK(c1.masses()[0] == 0.5);
    CHECK(c1.masses()[1] == 0.5);
    const auto& c2 = kernel.cell_laws.at("c2");
    CHECK(c2.values() == std::vector<double>{3.0, 4.0});
    CHECK(c2.masses()[0] == 0.5);
    CHECK(c2.masses()[1] == 0.5);

    const auto trivial = elicit::conditional_kernel(space, "trivial");
    REQUIRE(trivial.cell_laws.size() == 1);
    const auto& all = trivial.cell_laws.at("all");
    CHECK(all.values() == std::vector<double>{1.0, 2.0, 3.0, 4.0});

    const auto fine = elicit::conditional_kernel(space, "singletons");
    REQUIRE(fine.cell_laws.size() == 4);
    CHECK(fine.cell_laws.at("s2").size() == 1);
    CHECK(fine.cell_laws.at("s2").values()[0] == 2.0);

    CHECK(code_of([&] { elicit::conditional_kernel(space, "nope"); }) ==
          ErrorCode::UnknownPartition);
}

TEST_CASE("conditional kernels satisfy the defining identity by enumeration") {
    const auto space = sp4();
    for (const std::string& partition : {"G", "trivial", "singletons"}) {
        const auto kernel = elicit::conditional_kernel(space, partition);
        const auto& cells = space.cells(partition);
        // Over every cell and every response value b:
        //   P(cell and Y == b) == kernel(cell)({b}) * P(cell).
        for (const auto& [cell, members] : cells) {
            double cell_prob = 0.0;
            for (std::size_t idx : members) cell_prob += space.outcomes()[idx].probability;
            for (double b : {1.0, 2.0, 3.0, 4.0}) {
                double joint = 0.0;
                for (std::size_t idx : members) {
                    if (space.outcomes()[idx].response == b) {
                        joint += space.outcomes()[idx].probability;
                    }
                }
                const double via_kernel = kernel.cell_laws.at(cell).probe(b).point * cell_prob;
                CHECK(joint == doctest::Approx(via_kernel).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("ideal point forecasts broadcast per-cell functionals") {
    const auto space = sp4();

    const auto by_mean = elicit::ideal_point_forecast(space, "G", Functional::mean());
    CHECK(by_mean.by_outcome == std::vector<double>{1.5, 1.5, 3.5, 3.5});

    const auto unconditional =
        elicit::ideal_point_forecast(space, "trivial", Functional::mean());
    CHECK(unconditional.by_outcome == std::vector<double>{2.5, 2.5, 2.5, 2.5});

    const auto perfect =
        elicit::ideal_point_forecast(space, "singletons", Functional::mean());
    CHECK(perfect.by_outcome == std::vector<double>{1.0, 2.0, 3.0, 4.0});
    const auto perfect_q = elicit::ideal_point_forecast(space, "singletons",
                                                        Functional::quantile_lower(0.5));
    CHECK(perfect_q.by_outcome == std::vector<double>{1.0, 2.0, 3.0, 4.0});
}

TEST_CASE("functionals apply to external kernels cell by cell") {
    const auto space = sp4();
    const auto ideal = elicit::conditional_kernel(space, "G");
    const auto via_kernel =
        elicit::apply_functional_to_kernel(space, ideal, Functional::mean());
    const auto direct = elicit::ideal_point_forecast(space, "G", Functional::mean());
    CHECK(via_kernel.by_outcome == direct.by_outcome);

    MarkovKernelFinite miscalibrated{
        "G",
        {{"c1", DiscreteDistribution::point_mass(0.0)},
         {"c2", DiscreteDistribution::point_mass(9.0)}}};
    const auto off =
        elicit::apply_functional_to_kernel(space, miscalibrated, Functional::mean());
    CHECK(off.by_outcome == std::vector<double>{0.0, 0.0, 9.0, 9.0});

    MarkovKernelFinite incomplete{"G", {{"c1", DiscreteDistribution::point_mass(0.0)}}};
    CHECK(code_of([&] {
              elicit::apply_functional_to_kernel(space, incomplete, Functional::mean());
          }) == ErrorCode::SchemaError);
}

TEST_CASE("measurability is constancy on cells") {
    const auto space = sp4();
    CHECK(elicit::is_measurable(PointForecast{{1.5, 1.5, 3.5, 3.5}}, space, "G"));
    CHECK(!elicit::is_measurable(PointForecast{{1.0, 1.5, 3.5, 3.5}}, space, "G"));
    CHECK(elicit::is_measurable(PointForecast{{4.0, 3.0, 2.0, 1.0}}, space, "singletons"));
    CHECK(!elicit::is_measurable(PointForecast{{1.0, 1.0, 1.0, 2.0}}, space, "trivial"));
    CHECK(code_of([&] {
              elicit::is_measurable(PointForecast{{1.0, 2.0}}, space, "G");
          }) == ErrorCode::LengthMismatch);
}

TEST_CASE("expected point scores weight the loss by outcome probability") {
    const auto space = sp4();
    const auto squared = elicit::loss::squared();

    const auto ideal = elicit::ideal_point_forecast(space, "G", Functional::mean());
    CHECK(elicit::expected_point_score(space, ideal, squared) ==
          doctest::Approx(0.25).epsilon(1e-14));

    CHECK(elicit::expected_point_score(space, PointForecast{{2.5, 2.5, 2.5, 2.5}},
                                       squared) == doctest::Approx(1.25).epsilon(1e-14));

    CHECK(elicit::expected_point_score(space, PointForecast{{1.0, 2.0, 3.0, 4.0}},
                                       squared) == 0.0);
}

TEST_CASE("the best measurable forecast is the cell-wise Bayes act") {
    const auto space = sp4();

    const auto best_sq = elicit::best_measurable_forecast(space, "G", elicit::loss::squared());
    CHECK(best_sq.forecast.by_outcome == std::vector<double>{1.5, 1.5, 3.5, 3.5});
    CHECK(best_sq.value == doctest::Approx(0.25).epsilon(1e-12));

    const auto best_pin =
        elicit::best_measurable_forecast(space, "G", elicit::loss::pinball(0.5));
    CHECK(best_pin.forecast.by_outcome == std::vector<double>{1.0, 1.0, 3.0, 3.0});
    CHECK(best_pin.value == doctest::Approx(0.25).epsilon(1e-12));

    const auto best_trivial =
        elicit::best_measurable_forecast(space, "trivial", elicit::loss::squared());
    CHECK(best_trivial.forecast.by_outcome == std::vector<double>{2.5, 2.5, 2.5, 2.5});
    CHECK(best_trivial.value == doctest::Approx(1.25).epsilon(1e-12));
}

TEST_CASE("probabilistic scores average the rule over the space") {
    const auto space = sp4();

    const auto ideal = elicit::conditional_kernel(space, "G");
    CHECK(elicit::expected_probabilistic_score(space, ideal, elicit::rule::crps()).raw() ==
          doctest::Approx(0.25).epsilon(1e-13));

    const auto perfect = elicit::conditional_kernel(space, "singletons");
    CHECK(elicit::expected_probabilistic_score(space, perfect, elicit::rule::crps()).raw() ==
          0.0);

    MarkovKernelFinite blind{"trivial", {{"all", DiscreteDistribution::point_mass(0.0)}}};
    CHECK(elicit::expected_probabilistic_score(space, blind, elicit::rule::crps()).raw() ==
          doctest::Approx(2.5).epsilon(1e-14));

    // A kernel that misses one realized response is infinitely bad under
    // the log score.
    MarkovKernelFinite partial{
        "G",
        {{"c1", DiscreteDistribution::point_mass(1.0)},
         {"c2", DiscreteDistribution::point_mass(3.0)}}};
    CHECK(elicit::expected_probabilistic_score(space, partial, elicit::rule::log_score())
              .is_infinite());
}

TEST_CASE("ideal forecasts are measurable and optimal on random spaces") {
    gen::Rng rng(401);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 2 + rng.index(15);
        std::vector<Outcome> outcomes;
        PartitionMap partitions;
        std::map<std::string, std::string> fine;
        std::map<std::string, std::string> coarse;
        const std::size_t n_cells = 2 + rng.index(3);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::string label = "o" + std::to_string(i);
            const double p = 0.2 + rng.u01();
            outcomes.push_back({label, p, rng.uniform(-4.0, 4.0)});
            total += p;
            const std::size_t cell = rng.index(n_cells);
            fine[label] = "f" + std::to_string(cell);
            coarse[label] = cell == 0 ? "k0" : "k1";
        }
        for (auto& o : outcomes) o.probability /= total;
        partitions["fine"] = fine;
        partitions["coarse"] = coarse;
        const auto space = FinitePredictionSpace::create(outcomes, partitions);

        const auto loss = elicit::loss::squared();
        for (const std::string& partition : {"fine", "coarse"}) {
            const auto ideal =
                elicit::ideal_point_forecast(space, partition, Functional::mean());
            CHECK(elicit::is_measurable(ideal, space, partition));
            const auto best = elicit::best_measurable_forecast(space, partition, loss);
            const double ideal_score = elicit::expected_point_score(space, ideal, loss);
            CHECK(std::abs(ideal_score - best.value) <= 1e-10 * (1.0 + best.value));
        }

        const double fine_score = elicit::expected_point_score(
            space, elicit::ideal_point_forecast(space, "fine", Functional::mean()), loss);
        const double coarse_score = elicit::expected_point_score(
            space, elicit::ideal_point_forecast(space, "coarse", Functional::mean()),
            loss);
        CHECK(fine_score <= coarse_score + 1e-12);
    }
}
