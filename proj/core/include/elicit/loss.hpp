#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "elicit/errors.hpp"

namespace elicit {

/// Structural tag the minimizer relies on. The tag is asserted by the
/// caller; a cheap monotonicity sweep after every minimization raises
/// ShapeViolation when the landscape contradicts it.
enum class LossShape {
    piecewise_linear_in_a,
    smooth_convex_in_a,
    general_continuous,
};

/// Closed action interval; either end may be infinite.
struct ActionDomain {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool contains(double a) const { return a >= lo && a <= hi; }
};

/// Loss L(a, y), continuous in the action a for every outcome y.
/// An analytic action derivative may be attached; the smooth minimizer
/// uses it for derivative-sign bisection and falls back to a central
/// difference when it is absent.
class LossFunction {
public:
    using Eval = std::function<double(double, double)>;
    using Breakpoints = std::function<std::vector<double>(std::span<const double>)>;

    LossFunction(std::string name, LossShape shape, Eval evaluate,
                 Eval grad_a = {}, ActionDomain domain = {},
                 Breakpoints breakpoints = {});

    double operator()(double a, double y) const { return evaluate_(a, y); }

    bool has_grad() const { return static_cast<bool>(grad_a_); }
    /// dL/da, analytic when attached, otherwise a central difference.
    double grad_a(double a, double y) const;

    LossShape shape() const { return shape_; }
    const ActionDomain& domain() const { return domain_; }
    const std::string& name() const { return name_; }

    /// Candidate kink locations in a for a given support (defaults to the
    /// support itself).
    std::vector<double> breakpoints(std::span<const double> support) const;

private:
    std::string name_;
    LossShape shape_;
    Eval evaluate_;
    Eval grad_a_;
    ActionDomain domain_;
    Breakpoints breakpoints_;
};

namespace loss {

/// (a - y)^2, elicits the mean; its Bayes risk is the variance.
LossFunction squared();

/// (1{y <= a} - alpha)(a - y), elicits the alpha-quantile interval.
LossFunction pinball(double alpha);

/// |1{y <= a} - tau| (a - y)^2, elicits the tau-expectile.
LossFunction asymmetric_squared(double tau);

/// asymmetric_squared(tau) minus its value at a = 0; same minimizers.
LossFunction shifted_asymmetric_squared(double tau);

/// 1{y <= a}(1 - tau) phi1(|a - y|) + 1{y > a} tau phi2(|a - y|)
/// for convex, increasing phi with phi(0) = 0. Pass the derivatives to
/// enable the smooth minimizing path; without them the general
/// continuous path is used.
LossFunction generalized_quantile(double tau,
                                  std::function<double(double)> phi1,
                                  std::function<double(double)> phi2,
                                  std::function<double(double)> dphi1 = {},
                                  std::function<double(double)> dphi2 = {});

/// generalized_quantile with phi(u) = u^p, p >= 1 (InvalidExponent
/// otherwise). p == 1 coincides with pinball(tau).
LossFunction power_generalized(double tau, double p);

/// a + (y - a)^+ / (1 - alpha): joint quantile / expected-shortfall
/// minimization loss; its minimizers are the alpha-quantile interval and
/// its Bayes risk the upper-tail expected shortfall.
LossFunction es_ru_loss(double alpha);

}  // namespace loss

/// Tag-based loss description, mirroring the CLI JSON loss spec
/// {"kind": ..., "alpha"/"tau"/"p": ...}.
struct LossSpec {
    std::string kind;
    std::optional<double> alpha;
    std::optional<double> tau;
    std::optional<double> p;
};

LossFunction make_loss(const LossSpec& spec);

}  // namespace elicit
