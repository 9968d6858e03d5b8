#include "elicit/prediction_space.hpp"

#include <cmath>
#include <utility>

#include "elicit/errors.hpp"
#include "elicit/functionals.hpp"

namespace elicit {

FinitePredictionSpace FinitePredictionSpace::create(
    std::vector<Outcome> outcomes,
    std::map<std::string, std::map<std::string, std::string>> partitions) {
    if (outcomes.empty()) {
        raise(ErrorCode::EmptyDistribution, "prediction space has no outcomes");
    }
    double total = 0.0;
    std::map<std::string, std::size_t> index_of;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const Outcome& o = outcomes[i];
        if (!std::isfinite(o.probability) || !std::isfinite(o.response)) {
            raise(ErrorCode::NonFiniteValue,
                  "outcome \"" + o.label + "\" has a non-finite field");
        }
        if (!(o.probability > 0.0)) {
            raise(ErrorCode::MassNotNormalized,
                  "outcome \"" + o.label + "\" must have positive probability");
        }
        if (!index_of.emplace(o.label, i).second) {
            raise(ErrorCode::SchemaError, "duplicate outcome label \"" + o.label + "\"");
        }
        total += o.probability;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        raise(ErrorCode::MassNotNormalized,
              "outcome probabilities total " + std::to_string(total));
    }
    if (total != 1.0) {
        for (Outcome& o : outcomes) o.probability /= total;
    }

    FinitePredictionSpace space;
    space.outcomes_ = std::move(outcomes);
    for (auto& [name, assignment] : partitions) {
        for (const auto& [label, cell] : assignment) {
            if (!index_of.count(label)) {
                raise(ErrorCode::SchemaError, "partition \"" + name +
                                                  "\" assigns unknown outcome \"" +
                                                  label + "\"");
            }
            (void)cell;
        }
        std::vector<std::string> by_outcome(space.outcomes_.size());
        std::map<std::string, std::vector<std::size_t>> cells;
        for (std::size_t i = 0; i < space.outcomes_.size(); ++i) {
            const auto it = assignment.find(space.outcomes_[i].label);
            if (it == assignment.end()) {
                raise(ErrorCode::SchemaError,
                      "partition \"" + name + "\" does not cover outcome \"" +
                          space.outcomes_[i].label + "\"");
            }
            by_outcome[i] = it->second;
            cells[it->second].push_back(i);
        }
        space.cell_by_outcome_.emplace(name, std::move(by_outcome));
        space.cells_.emplace(name, std::move(cells));
    }
    return space;
}

std::vector<std::string> FinitePredictionSpace::partition_names() const {
    std::vector<std::string> names;
    names.reserve(cells_.size());
    for (const auto& [name, cells] : cells_) names.push_back(name);
    return names;
}

bool FinitePredictionSpace::has_partition(const std::string& name) const {
    return cells_.count(name) != 0;
}

const std::map<std::string, std::vector<std::size_t>>&
FinitePredictionSpace::cells(const std::string& partition) const {
    const auto it = cells_.find(partition);
    if (it == cells_.end()) {
        raise(ErrorCode::UnknownPartition, "no partition named \"" + partition + "\"");
    }
    return it->second;
}

const std::string& FinitePredictionSpace::cell_of(const std::string& partition,
                                                  std::size_t outcome) const {
    const auto it = cell_by_outcome_.find(partition);
    if (it == cell_by_outcome_.end()) {
        raise(ErrorCode::UnknownPartition, "no partition named \"" + partition + "\"");
    }
    if (outcome >= it->second.size()) {
        raise(ErrorCode::LengthMismatch, "outcome index out of range");
    }
    return it->second[outcome];
}

DiscreteDistribution FinitePredictionSpace::response_law() const {
    std::vector<RawAtom> atoms;
    atoms.reserve(outcomes_.size());
    for (const Outcome& o : outcomes_) {
        atoms.push_back(RawAtom{o.response, o.probability});
    }
    return DiscreteDistribution::canonicalize(atoms);
}

Functional Functional::mean() {
    return Functional{"mean",
                      [](const DiscreteDistribution& d) { return d.mean(); }};
}

Functional Functional::quantile_lower(double alpha) {
    return Functional{"quantile_lower", [alpha](const DiscreteDistribution& d) {
                          return elicit::quantile_lower(d, alpha);
                      }};
}

Functional Functional::expectile(double tau) {
    return Functional{"expectile", [tau](const DiscreteDistribution& d) {
                          return elicit::expectile(d, tau);
                      }};
}

Functional Functional::es_upper(double alpha) {
    return Functional{"es_upper", [alpha](const DiscreteDistribution& d) {
                          return weighted_quantile_average(
                                     d, WeightFunction::es_upper(alpha))
                              .value();
                      }};
}

Functional Functional::from_loss(const LossFunction& loss) {
    return Functional{"loss_minimizer", [loss](const DiscreteDistribution& d) {
                          return minimizer_interval(loss, d).t_min;
                      }};
}

MarkovKernelFinite conditional_kernel(const FinitePredictionSpace& space,
                                      const std::string& partition) {
    MarkovKernelFinite kernel;
    kernel.partition = partition;
    for (const auto& [cell, members] : space.cells(partition)) {
        double cell_mass = 0.0;
        for (std::size_t i : members) cell_mass += space.outcomes()[i].probability;
        std::vector<RawAtom> atoms;
        atoms.reserve(members.size());
        for (std::size_t i : members) {
            atoms.push_back(RawAtom{space.outcomes()[i].response,
                                    space.outcomes()[i].probability / cell_mass});
        }
        kernel.cell_laws.emplace(cell, DiscreteDistribution::canonicalize(atoms));
    }
    return kernel;
}

PointForecast apply_functional_to_kernel(const FinitePredictionSpace& space,
                                         const MarkovKernelFinite& kernel,
                                         const Functional& functional) {
    const auto& cells = space.cells(kernel.partition);
    // One evaluation per cell, broadcast, so per-cell values are bitwise
    // identical and measurability holds under exact comparison.
    std::map<std::string, double> value_of;
    for (const auto& [cell, members] : cells) {
        const auto it = kernel.cell_laws.find(cell);
        if (it == kernel.cell_laws.end()) {
            raise(ErrorCode::SchemaError,
                  "kernel has no law for cell \"" + cell + "\"");
        }
        value_of.emplace(cell, functional.apply(it->second));
        (void)members;
    }
    PointForecast forecast;
    forecast.by_outcome.resize(space.size());
    for (const auto& [cell, members] : cells) {
        for (std::size_t i : members) {
            forecast.by_outcome[i] = value_of.at(cell);
        }
    }
    return forecast;
}

PointForecast ideal_point_forecast(const FinitePredictionSpace& space,
                                   const std::string& partition,
                                   const Functional& functional) {
    return apply_functional_to_kernel(space, conditional_kernel(space, partition),
                                      functional);
}

bool is_measurable(const PointForecast& forecast,
                   const FinitePredictionSpace& space,
                   const std::string& partition) {
    if (forecast.by_outcome.size() != space.size()) {
        raise(ErrorCode::LengthMismatch,
              "forecast length differs from the outcome count");
    }
    for (const auto& [cell, members] : space.cells(partition)) {
        for (std::size_t i : members) {
            if (forecast.by_outcome[i] != forecast.by_outcome[members.front()]) {
                return false;
            }
        }
    }
    return true;
}

double expected_point_score(const FinitePredictionSpace& space,
                            const PointForecast& forecast,
                            const LossFunction& loss) {
    if (forecast.by_outcome.size() != space.size()) {
        raise(ErrorCode::LengthMismatch,
              "forecast length differs from the outcome count");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < space.size(); ++i) {
        const double a = forecast.by_outcome[i];
        if (!loss.domain().contains(a)) {
            raise(ErrorCode::ActionOutOfDomain,
                  "forecast value lies outside the loss domain");
        }
        const double l = loss(a, space.outcomes()[i].response);
        if (!std::isfinite(l)) {
            raise(ErrorCode::NonFiniteValue, "loss is not finite on an outcome");
        }
        acc += space.outcomes()[i].probability * l;
    }
    return acc;
}

BestForecast best_measurable_forecast(const FinitePredictionSpace& space,
                                      const std::string& partition,
                                      const LossFunction& loss) {
    const MarkovKernelFinite kernel = conditional_kernel(space, partition);
    const PointForecast forecast =
        apply_functional_to_kernel(space, kernel, Functional::from_loss(loss));
    return BestForecast{forecast, expected_point_score(space, forecast, loss)};
}

ScoreValue expected_probabilistic_score(const FinitePredictionSpace& space,
                                        const MarkovKernelFinite& kernel,
                                        const ScoringRule& rule) {
    const auto& cells = space.cells(kernel.partition);
    for (const auto& [cell, members] : cells) {
        if (!kernel.cell_laws.count(cell)) {
            raise(ErrorCode::SchemaError,
                  "kernel has no law for cell \"" + cell + "\"");
        }
        (void)members;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < space.size(); ++i) {
        const std::string& cell = space.cell_of(kernel.partition, i);
        const ScoreValue s =
            rule.score(kernel.cell_laws.at(cell), space.outcomes()[i].response);
        if (s.is_infinite()) {
            return ScoreValue::infinity();
        }
        acc += space.outcomes()[i].probability * s.raw();
    }
    return ScoreValue(acc);
}

}  // namespace elicit
