#pragma once

#include <optional>

#include "elicit/distribution.hpp"
#include "elicit/extended_real.hpp"
#include "elicit/weight.hpp"

namespace elicit {

/// Lower/upper quantile pair at one level. lower <= upper always.
struct QuantileInterval {
    ExtendedReal lower;
    ExtendedReal upper;
};

/// Lower quantile inf{x : F(x) >= alpha} and upper quantile
/// sup{x : F(x-) <= alpha} at level alpha in [0, 1]. Conventions:
/// lower is -infinity at alpha == 0 and the largest atom at alpha == 1;
/// upper is the smallest atom at alpha == 0 and the largest at alpha == 1.
/// The lower quantile satisfies, exactly over the stored cdf values,
///   q_alpha(F) > p  iff  F(p) < alpha.
QuantileInterval quantiles(const DiscreteDistribution& dist, double alpha);

/// Finite lower quantile for alpha in (0, 1].
double quantile_lower(const DiscreteDistribution& dist, double alpha);

/// T_w(F) = integral over (0, 1) of q_gamma(F) w(gamma) dgamma, evaluated
/// segment by segment against the cumulative masses. With an exact
/// antiderivative the result is a finite weighted sum of atom values;
/// otherwise each segment is integrated by adaptive Simpson quadrature
/// (absolute tolerance 1e-10, depth cap 40).
ExtendedReal weighted_quantile_average(const DiscreteDistribution& dist,
                                       const WeightFunction& weight);

/// First four moment summaries. variance is E[X^2] - mean^2; the ratio
/// statistics are absent (not NaN) when the variance vanishes.
struct MomentStats {
    double mean = 0.0;
    double variance = 0.0;
    std::optional<double> skewness;
    std::optional<double> kurtosis;
    std::optional<double> sharpe_ratio;
};

MomentStats moment_stats(const DiscreteDistribution& dist);

/// tau-expectile: the unique root of
///   g(x) = tau E[(Y - x)^+] - (1 - tau) E[(x - Y)^+],
/// solved exactly on the piecewise linear segments of g.
double expectile(const DiscreteDistribution& dist, double tau);

/// (P((t, inf)), P((-inf, t)), P({t})). The triple satisfies
/// lower_tail + point + upper_tail == 1.0 exactly in that association:
/// upper_tail is stored as 1 - F(t) with F(t) the exact prefix sum.
struct ComposedEvaluations {
    double upper_tail;
    double lower_tail;
    double point;
};

ComposedEvaluations composed_evaluations(const DiscreteDistribution& dist, double t);

/// Law of Y conditionally on X being in its corrected beta-tail: with
/// v the lower beta-quantile of the X marginal,
///   eta(B) = [ P((v,inf) x B)
///            + (1 - beta - P_X((v,inf))) * P({v} x B) / P_X({v}) ] / (1 - beta),
/// with the 0/0 correction ratio read as 0. The raw masses are checked to
/// total 1 within 1e-12 before canonicalization.
DiscreteDistribution covar_conditional(const BivariateDiscreteDistribution& joint,
                                       double beta);

struct CoRiskMeasures {
    double covar;  // lower alpha-quantile of the conditional law
    double coes;   // upper-tail expected shortfall of the conditional law
};

CoRiskMeasures covar_coes(const BivariateDiscreteDistribution& joint,
                          double alpha, double beta);

}  // namespace elicit
