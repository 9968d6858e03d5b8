#include "elicit/weight.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "elicit/errors.hpp"

namespace elicit {

namespace {

void require_level(double alpha, const char* what) {
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        raise(ErrorCode::InvalidLevel, std::string(what) + " must lie strictly in (0, 1)");
    }
}

}  // namespace

WeightFunction::WeightFunction(std::string name, Fn evaluate, Fn antiderivative)
    : name_(std::move(name)),
      evaluate_(std::move(evaluate)),
      antiderivative_(std::move(antiderivative)) {
    if (!evaluate_) {
        raise(ErrorCode::InvalidWeight, "weight function has no evaluator");
    }
}

double WeightFunction::operator()(double gamma) const {
    const double w = evaluate_(gamma);
    if (std::isnan(w) || w < 0.0) {
        raise(ErrorCode::InvalidWeight, "weight is negative or NaN at a node");
    }
    return w;
}

double WeightFunction::antiderivative(double t) const {
    if (!antiderivative_) {
        raise(ErrorCode::InvalidWeight, "weight function has no antiderivative");
    }
    return antiderivative_(t);
}

WeightFunction WeightFunction::uniform() {
    return WeightFunction(
        "uniform",
        [](double g) { return (g >= 0.0 && g <= 1.0) ? 1.0 : 0.0; },
        [](double t) { return std::clamp(t, 0.0, 1.0); });
}

WeightFunction WeightFunction::es_lower(double alpha) {
    require_level(alpha, "es_lower level");
    return WeightFunction(
        "es_lower",
        [alpha](double g) { return (g >= 0.0 && g <= alpha) ? 1.0 / alpha : 0.0; },
        [alpha](double t) { return std::clamp(t, 0.0, alpha) / alpha; });
}

WeightFunction WeightFunction::es_upper(double alpha) {
    require_level(alpha, "es_upper level");
    return WeightFunction(
        "es_upper",
        [alpha](double g) { return (g >= alpha && g <= 1.0) ? 1.0 / (1.0 - alpha) : 0.0; },
        [alpha](double t) {
            return (std::clamp(t, alpha, 1.0) - alpha) / (1.0 - alpha);
        });
}

WeightFunction WeightFunction::rvar(double alpha, double beta) {
    if (!(alpha > 0.0) || !(alpha < beta) || !(beta < 1.0)) {
        raise(ErrorCode::InvalidLevel, "rvar levels must satisfy 0 < alpha < beta < 1");
    }
    return WeightFunction(
        "rvar",
        [alpha, beta](double g) {
            return (g >= alpha && g <= beta) ? 1.0 / (beta - alpha) : 0.0;
        },
        [alpha, beta](double t) {
            return (std::clamp(t, alpha, beta) - alpha) / (beta - alpha);
        });
}

ThresholdWeight ThresholdWeight::constant_one() {
    return ThresholdWeight{[](double) { return 1.0; }, [](double t) { return t; }};
}

ThresholdWeight ThresholdWeight::indicator(double lo, double hi) {
    if (std::isnan(lo) || std::isnan(hi) || !(lo < hi)) {
        raise(ErrorCode::InvalidWeight, "indicator weight needs lo < hi");
    }
    return ThresholdWeight{
        [lo, hi](double z) { return (z >= lo && z <= hi) ? 1.0 : 0.0; },
        [lo, hi](double t) { return std::clamp(t, lo, hi); }};
}

}  // namespace elicit
