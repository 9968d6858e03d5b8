#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "elicit/distribution.hpp"
#include "elicit/elicitation.hpp"
#include "elicit/loss.hpp"
#include "elicit/scoring.hpp"

namespace elicit {

struct Outcome {
    std::string label;
    double probability;
    double response;  // realized value of Y on this outcome
};

/// Finite probability space carrying a real response and named partitions
/// that model information sets. Outcome labels are unique; probabilities
/// are positive and renormalized to total 1 (ingested total within 1e-9).
class FinitePredictionSpace {
public:
    /// partition name -> (outcome label -> cell label); every partition
    /// must cover every outcome.
    static FinitePredictionSpace create(
        std::vector<Outcome> outcomes,
        std::map<std::string, std::map<std::string, std::string>> partitions);

    std::size_t size() const { return outcomes_.size(); }
    const std::vector<Outcome>& outcomes() const { return outcomes_; }
    std::vector<std::string> partition_names() const;
    bool has_partition(const std::string& name) const;

    /// cell label -> outcome indices, ordered; UnknownPartition if absent.
    const std::map<std::string, std::vector<std::size_t>>& cells(
        const std::string& partition) const;
    const std::string& cell_of(const std::string& partition, std::size_t outcome) const;

    /// Law of the response under the unconditional measure.
    DiscreteDistribution response_law() const;

private:
    FinitePredictionSpace() = default;

    std::vector<Outcome> outcomes_;
    // per partition: cell of each outcome (aligned) and the cell index map
    std::map<std::string, std::vector<std::string>> cell_by_outcome_;
    std::map<std::string, std::map<std::string, std::vector<std::size_t>>> cells_;
};

/// Cell label -> conditional law of the response, attached to a partition.
struct MarkovKernelFinite {
    std::string partition;
    std::map<std::string, DiscreteDistribution> cell_laws;
};

/// Point forecast: one value per outcome, aligned with the space's
/// outcome order.
struct PointForecast {
    std::vector<double> by_outcome;
};

/// Real statistic of a distribution, the target a point forecaster
/// reports. from_loss uses the smallest Bayes act of the loss.
struct Functional {
    std::string name;
    std::function<double(const DiscreteDistribution&)> apply;

    static Functional mean();
    static Functional quantile_lower(double alpha);
    static Functional expectile(double tau);
    static Functional es_upper(double alpha);
    static Functional from_loss(const LossFunction& loss);
};

/// Restrict-and-renormalize the response law to each cell of a partition.
MarkovKernelFinite conditional_kernel(const FinitePredictionSpace& space,
                                      const std::string& partition);

/// T applied to each cell's conditional law, broadcast to the outcomes of
/// that cell. Measurable with respect to the partition by construction.
PointForecast ideal_point_forecast(const FinitePredictionSpace& space,
                                   const std::string& partition,
                                   const Functional& functional);

/// T applied cell-wise to an externally supplied kernel on the same space.
PointForecast apply_functional_to_kernel(const FinitePredictionSpace& space,
                                         const MarkovKernelFinite& kernel,
                                         const Functional& functional);

/// True when the forecast is constant on every cell (bitwise).
bool is_measurable(const PointForecast& forecast,
                   const FinitePredictionSpace& space,
                   const std::string& partition);

/// Sum over outcomes of P(omega) L(forecast(omega), Y(omega)).
double expected_point_score(const FinitePredictionSpace& space,
                            const PointForecast& forecast,
                            const LossFunction& loss);

struct BestForecast {
    PointForecast forecast;
    double value;
};

/// Optimal partition-measurable point forecast under a loss: the cell-wise
/// smallest Bayes act, with its expected score.
BestForecast best_measurable_forecast(const FinitePredictionSpace& space,
                                      const std::string& partition,
                                      const LossFunction& loss);

/// Sum over outcomes of P(omega) S(kernel(cell(omega)); Y(omega)); +inf
/// propagates.
ScoreValue expected_probabilistic_score(const FinitePredictionSpace& space,
                                        const MarkovKernelFinite& kernel,
                                        const ScoringRule& rule);

}  // namespace elicit
