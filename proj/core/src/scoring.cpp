#include "elicit/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "elicit/errors.hpp"
#include "elicit/functionals.hpp"

namespace elicit {

namespace {

struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double t) {
        const double s = sum + t;
        if (std::abs(sum) >= std::abs(t)) {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }

    double value() const { return sum + comp; }
};

void require_finite_observation(double y) {
    if (!std::isfinite(y)) {
        raise(ErrorCode::NonFiniteValue, "observation is not finite");
    }
}

// E|X - X'| through prefix sums: each atom pairs against everything below
// it, so the double sum collapses into one compensated ascending pass.
double mean_absolute_spread(const DiscreteDistribution& dist) {
    CompensatedSum acc;
    double cum_mass = 0.0;
    double cum_weighted = 0.0;
    const auto& values = dist.values();
    const auto& masses = dist.masses();
    for (std::size_t i = 0; i < values.size(); ++i) {
        acc.add(masses[i] * (values[i] * cum_mass - cum_weighted));
        cum_mass += masses[i];
        cum_weighted += masses[i] * values[i];
    }
    return 2.0 * acc.value();
}

double crps_energy(const DiscreteDistribution& dist, double y) {
    CompensatedSum acc;
    const auto& values = dist.values();
    const auto& masses = dist.masses();
    for (std::size_t i = 0; i < values.size(); ++i) {
        acc.add(masses[i] * std::abs(y - values[i]));
    }
    return std::max(0.0, acc.value() - 0.5 * mean_absolute_spread(dist));
}

// Integral of (F(z) - 1{y <= z})^2 dW(z). The integrand is constant
// between consecutive support-or-observation points, so the integral is a
// finite sum of antiderivative increments; outside the point hull it
// vanishes identically.
double crps_threshold_weighted(const DiscreteDistribution& dist, double y,
                               const std::function<double(double)>& anti) {
    std::vector<double> points(dist.values().begin(), dist.values().end());
    points.push_back(y);
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    CompensatedSum acc;
    for (std::size_t k = 0; k + 1 < points.size(); ++k) {
        const double level = dist.probe(points[k]).cdf;
        const double indicator = y <= points[k] ? 1.0 : 0.0;
        const double diff = level - indicator;
        acc.add(diff * diff * (anti(points[k + 1]) - anti(points[k])));
    }
    return std::max(0.0, acc.value());
}

}  // namespace

ScoreValue::ScoreValue(double v) : v_(v) {
    if (std::isnan(v) || v == -std::numeric_limits<double>::infinity()) {
        raise(ErrorCode::NonFiniteValue, "score must be finite or +infinity");
    }
}

ScoreValue ScoreValue::infinity() {
    return ScoreValue(std::numeric_limits<double>::infinity());
}

bool ScoreValue::is_infinite() const {
    return v_ == std::numeric_limits<double>::infinity();
}

ScoreValue crps(const DiscreteDistribution& forecast, double y,
                CrpsMethod method) {
    require_finite_observation(y);
    switch (method) {
        case CrpsMethod::energy:
            return ScoreValue(crps_energy(forecast, y));
        case CrpsMethod::threshold:
            return ScoreValue(crps_threshold_weighted(
                forecast, y, [](double t) { return t; }));
    }
    raise(ErrorCode::InvalidParameter, "unknown CRPS method");
}

ScoreValue twcrps(const DiscreteDistribution& forecast, double y,
                  const ThresholdWeight& weight) {
    require_finite_observation(y);
    if (!weight.antiderivative) {
        raise(ErrorCode::InvalidWeight, "threshold weight needs an antiderivative");
    }
    return ScoreValue(crps_threshold_weighted(forecast, y, weight.antiderivative));
}

ScoreValue crps_quantile_numeric(const DiscreteDistribution& forecast, double y,
                                 std::size_t grid_size) {
    require_finite_observation(y);
    if (grid_size < 16) {
        raise(ErrorCode::InvalidParameter,
              "quantile grid needs at least 16 nodes");
    }
    // Midpoint rule over the level axis; every interior level has a finite
    // lower quantile, so no tail truncation is involved.
    CompensatedSum acc;
    for (std::size_t j = 0; j < grid_size; ++j) {
        const double gamma =
            (static_cast<double>(j) + 0.5) / static_cast<double>(grid_size);
        const double q = quantile_lower(forecast, gamma);
        const double indicator = y <= q ? 1.0 : 0.0;
        acc.add(2.0 * (indicator - gamma) * (q - y));
    }
    return ScoreValue(std::max(0.0, acc.value() / static_cast<double>(grid_size)));
}

ScoreValue log_score(const DiscreteDistribution& forecast, double y) {
    require_finite_observation(y);
    const double p = forecast.probe(y).point;
    if (p <= 0.0) {
        return ScoreValue::infinity();
    }
    return ScoreValue(-std::log(p));
}

namespace rule {

ScoringRule crps(CrpsMethod method) {
    return ScoringRule{"crps",
                       [method](const DiscreteDistribution& f, double y) {
                           return elicit::crps(f, y, method);
                       }};
}

ScoringRule twcrps(ThresholdWeight weight) {
    return ScoringRule{"twcrps",
                       [weight = std::move(weight)](const DiscreteDistribution& f,
                                                    double y) {
                           return elicit::twcrps(f, y, weight);
                       }};
}

ScoringRule log_score() {
    return ScoringRule{"log_score", [](const DiscreteDistribution& f, double y) {
                           return elicit::log_score(f, y);
                       }};
}

}  // namespace rule

ScoreValue expected_score(const ScoringRule& rule,
                          const DiscreteDistribution& forecast,
                          const DiscreteDistribution& truth) {
    double acc = 0.0;
    const auto& values = truth.values();
    const auto& masses = truth.masses();
    for (std::size_t i = 0; i < values.size(); ++i) {
        const ScoreValue s = rule.score(forecast, values[i]);
        if (s.is_infinite()) {
            return ScoreValue::infinity();
        }
        acc += masses[i] * s.raw();
    }
    return ScoreValue(acc);
}

ScoreSeries::ScoreSeries(std::vector<ScoreEntry> entries)
    : entries_(std::move(entries)) {}

ScoreValue ScoreSeries::mean() const {
    if (entries_.empty()) {
        raise(ErrorCode::DegenerateSeries, "empty score series has no mean");
    }
    double acc = 0.0;
    for (const ScoreEntry& e : entries_) {
        if (e.score.is_infinite()) {
            return ScoreValue::infinity();
        }
        acc += e.score.raw();
    }
    return ScoreValue(acc / static_cast<double>(entries_.size()));
}

std::size_t ScoreSeries::infinite_count() const {
    std::size_t n = 0;
    for (const ScoreEntry& e : entries_) {
        if (e.score.is_infinite()) ++n;
    }
    return n;
}

ScoreSeries score_series(const ScoringRule& rule,
                         std::span<const DiscreteDistribution> forecasts,
                         std::span<const double> observations) {
    if (forecasts.size() != observations.size()) {
        raise(ErrorCode::LengthMismatch,
              "forecast and observation counts differ");
    }
    std::vector<ScoreEntry> entries;
    entries.reserve(forecasts.size());
    for (std::size_t i = 0; i < forecasts.size(); ++i) {
        entries.push_back(
            ScoreEntry{rule.score(forecasts[i], observations[i]), observations[i]});
    }
    return ScoreSeries(std::move(entries));
}

DmResult diebold_mariano(const ScoreSeries& a, const ScoreSeries& b,
                         std::size_t hac_lag) {
    if (a.size() != b.size()) {
        raise(ErrorCode::LengthMismatch, "score series lengths differ");
    }
    const std::size_t n = a.size();
    if (n < 2) {
        raise(ErrorCode::DegenerateSeries,
              "need at least two paired scores to compare");
    }
    if (hac_lag >= n) {
        raise(ErrorCode::InvalidParameter,
              "HAC lag must be smaller than the series length");
    }
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (a.entries()[i].score.is_infinite() ||
            b.entries()[i].score.is_infinite()) {
            raise(ErrorCode::InfiniteScore,
                  "cannot compare series containing infinite scores");
        }
        d[i] = a.entries()[i].score.raw() - b.entries()[i].score.raw();
    }
    const auto [mn, mx] = std::minmax_element(d.begin(), d.end());
    if (*mn == *mx) {
        // A constant loss differential carries no sampling noise; the test
        // degenerates to a pure sign decision.
        if (*mn == 0.0) {
            return DmResult{0.0, 1.0};
        }
        const double inf = std::numeric_limits<double>::infinity();
        return DmResult{*mn > 0.0 ? inf : -inf, 0.0};
    }
    double dbar = 0.0;
    for (double v : d) dbar += v;
    dbar /= static_cast<double>(n);
    double sigma2 = 0.0;
    for (std::size_t l = 0; l <= hac_lag; ++l) {
        double gamma = 0.0;
        for (std::size_t i = l; i < n; ++i) {
            gamma += (d[i] - dbar) * (d[i - l] - dbar);
        }
        gamma /= static_cast<double>(n);
        if (l == 0) {
            sigma2 += gamma;
        } else {
            const double bartlett = 1.0 - static_cast<double>(l) /
                                              static_cast<double>(hac_lag + 1);
            sigma2 += 2.0 * bartlett * gamma;
        }
    }
    if (!(sigma2 > 0.0)) {
        raise(ErrorCode::DegenerateSeries,
              "long-run variance estimate is not positive");
    }
    const double t = dbar / std::sqrt(sigma2 / static_cast<double>(n));
    const double p = std::erfc(std::abs(t) / std::sqrt(2.0));
    return DmResult{t, p};
}

}  // namespace elicit
