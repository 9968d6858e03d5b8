#pragma once

#include <functional>
#include <string>

namespace elicit {

/// Nonnegative weight on the unit interval driving weighted quantile
/// averages. When an exact antiderivative is supplied the average is
/// evaluated in closed form per support segment; otherwise an adaptive
/// quadrature fallback integrates the weight numerically.
class WeightFunction {
public:
    using Fn = std::function<double(double)>;

    WeightFunction(std::string name, Fn evaluate, Fn antiderivative = {});

    /// w(gamma); raises InvalidWeight on a negative value.
    double operator()(double gamma) const;

    bool has_antiderivative() const { return static_cast<bool>(antiderivative_); }
    /// W with W(b) - W(a) = integral of w over [a, b].
    double antiderivative(double t) const;

    const std::string& name() const { return name_; }

    /// 1 on [0, 1]: the average of all lower quantiles, i.e. the mean.
    static WeightFunction uniform();
    /// 1_[0, alpha] / alpha: lower-tail expected shortfall weight.
    static WeightFunction es_lower(double alpha);
    /// 1_[alpha, 1] / (1 - alpha): upper-tail expected shortfall weight.
    static WeightFunction es_upper(double alpha);
    /// 1_[alpha, beta] / (beta - alpha): range value at risk weight.
    static WeightFunction rvar(double alpha, double beta);

private:
    std::string name_;
    Fn evaluate_;
    Fn antiderivative_;
};

/// Weight on the real (threshold) axis for threshold-weighted CRPS.
/// The antiderivative is required and must be nondecreasing.
struct ThresholdWeight {
    std::function<double(double)> evaluate;
    std::function<double(double)> antiderivative;

    static ThresholdWeight constant_one();
    /// Indicator of [lo, hi]; either end may be infinite.
    static ThresholdWeight indicator(double lo, double hi);
};

}  // namespace elicit
