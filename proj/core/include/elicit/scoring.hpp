#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "elicit/distribution.hpp"
#include "elicit/weight.hpp"

namespace elicit {

/// Realized score in (-inf, +inf]. +inf is a legal value (log score on a
/// zero-mass outcome); NaN and -inf are rejected at construction.
class ScoreValue {
public:
    ScoreValue() : v_(0.0) {}
    explicit ScoreValue(double v);

    static ScoreValue infinity();

    double raw() const { return v_; }
    bool is_infinite() const;
    bool is_finite() const { return !is_infinite(); }

    friend bool operator==(ScoreValue a, ScoreValue b) { return a.v_ == b.v_; }
    friend bool operator<(ScoreValue a, ScoreValue b) { return a.v_ < b.v_; }
    friend bool operator<=(ScoreValue a, ScoreValue b) { return a.v_ <= b.v_; }

private:
    double v_;
};

enum class CrpsMethod {
    energy,     // E|X - y| - (1/2) E|X - X'| via prefix sums
    threshold,  // exact integral of (F(z) - 1{y <= z})^2 over the breakpoints
};

/// Continuous ranked probability score of a discrete forecast against a
/// realized value. Both methods agree within 1e-10; the energy form is
/// the default.
ScoreValue crps(const DiscreteDistribution& forecast, double y,
                CrpsMethod method = CrpsMethod::energy);

/// Threshold-weighted CRPS: integral of (F(z) - 1{y <= z})^2 w(z) dz,
/// exact against the weight's antiderivative. Reduces to crps when w == 1.
ScoreValue twcrps(const DiscreteDistribution& forecast, double y,
                  const ThresholdWeight& weight);

/// Midpoint-rule discretization of the quantile representation
/// integral over (0,1) of 2 (1{y <= q_gamma} - gamma)(q_gamma - y) dgamma
/// with grid_size >= 16 nodes. Converges to crps at rate O(1/n).
ScoreValue crps_quantile_numeric(const DiscreteDistribution& forecast, double y,
                                 std::size_t grid_size);

/// -log P({y}); +inf when the forecast puts no mass on y.
ScoreValue log_score(const DiscreteDistribution& forecast, double y);

/// Named scoring rule, the unit the series/propriety machinery works in.
struct ScoringRule {
    std::string name;
    std::function<ScoreValue(const DiscreteDistribution&, double)> score;
};

namespace rule {
ScoringRule crps(CrpsMethod method = CrpsMethod::energy);
ScoringRule twcrps(ThresholdWeight weight);
ScoringRule log_score();
}  // namespace rule

/// E_{Y~truth}[ S(forecast; Y) ]; +inf as soon as one support point
/// scores +inf.
ScoreValue expected_score(const ScoringRule& rule,
                          const DiscreteDistribution& forecast,
                          const DiscreteDistribution& truth);

struct ScoreEntry {
    ScoreValue score;
    double observation;
};

/// Realized score path. The mean is +inf when any entry is infinite.
class ScoreSeries {
public:
    explicit ScoreSeries(std::vector<ScoreEntry> entries);

    std::size_t size() const { return entries_.size(); }
    const std::vector<ScoreEntry>& entries() const { return entries_; }
    ScoreValue mean() const;
    std::size_t infinite_count() const;

private:
    std::vector<ScoreEntry> entries_;
};

ScoreSeries score_series(const ScoringRule& rule,
                         std::span<const DiscreteDistribution> forecasts,
                         std::span<const double> observations);

struct DmResult {
    double statistic;  // +-inf on a degenerate nonzero loss differential
    double p_value;    // two-sided standard normal
};

/// Diebold-Mariano comparison of two realized score series with a
/// Bartlett (Newey-West) HAC variance of the score differential.
/// hac_lag == 0 is the plain sample variance with denominator n.
DmResult diebold_mariano(const ScoreSeries& a, const ScoreSeries& b,
                         std::size_t hac_lag = 0);

}  // namespace elicit
