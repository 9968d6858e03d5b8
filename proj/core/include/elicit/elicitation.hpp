#pragma once

#include <span>

#include "elicit/distribution.hpp"
#include "elicit/loss.hpp"

namespace elicit {

/// Closed interval of minimizers of the expected loss plus its value.
/// expected loss at t_min and t_max agree within 1e-10 relative slack.
struct MinimizerInterval {
    double t_min;
    double t_max;
    double bayes_risk;
};

/// E[L(a, Y)] under dist, accumulated in ascending value order.
/// Raises ActionOutOfDomain when a lies outside the action domain.
double expected_loss(const LossFunction& loss, double a,
                     const DiscreteDistribution& dist);

/// Full minimizer interval [t_min, t_max] of a |-> E[L(a, Y)].
///
/// piecewise_linear_in_a: one-sided slopes are evaluated at the candidate
/// breakpoints (support atoms plus loss-declared kinks) and the sign
/// change located; a slope is treated as flat below 1e-10 of the slope
/// scale. smooth_convex_in_a: derivative-sign bisection from the bracket
/// [min atom - 1, max atom + 1], geometrically expanded while the outer
/// derivative signs do not confirm decrease/increase, raising Unbracketed
/// past 2^40 times the span. general_continuous: golden-section descent
/// plus flat-boundary refinement.
///
/// Every minimization ends with a 256-point monotonicity sweep of the
/// landscape (decreasing left of the interval, flat inside, increasing
/// right of it) that raises ShapeViolation when the declared shape lies.
MinimizerInterval minimizer_interval(const LossFunction& loss,
                                     const DiscreteDistribution& dist);

/// Identification (moment) functions V(x, y) whose expected value
/// vanishes exactly at the functional value.
class Identification {
public:
    enum class Kind { mean, quantile, expectile };

    static Identification mean() { return Identification(Kind::mean, 0.0); }
    static Identification quantile(double alpha);
    static Identification expectile(double tau);

    Kind kind() const { return kind_; }
    double level() const { return level_; }

private:
    Identification(Kind kind, double level) : kind_(kind), level_(level) {}

    Kind kind_;
    double level_;
};

/// E[V(x, Y)]: mean -> x - E[Y]; quantile(alpha) -> F(x) - alpha;
/// expectile(tau) -> (1 - tau) E[(x - Y)^+] - tau E[(Y - x)^+].
double identification_residual(const Identification& id, double x,
                               const DiscreteDistribution& dist);

/// True when t is within 1e-10 of optimal against every grid action:
/// E[L(t, Y)] <= E[L(a, Y)] + 1e-10 for all a in grid.
bool consistency_check(const LossFunction& loss, double t,
                       const DiscreteDistribution& dist,
                       std::span<const double> grid);

}  // namespace elicit
