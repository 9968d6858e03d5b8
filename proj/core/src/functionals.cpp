#include "elicit/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

namespace elicit {

namespace {

void require_closed_level(double alpha) {
    if (std::isnan(alpha) || alpha < 0.0 || alpha > 1.0) {
        raise(ErrorCode::InvalidLevel, "level must lie in [0, 1]");
    }
}

void require_open_level(double alpha, const char* what) {
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        raise(ErrorCode::InvalidLevel, std::string(what) + " must lie strictly in (0, 1)");
    }
}

// Composite adaptive Simpson on [a, b] with absolute tolerance and a depth
// cap; the classic Richardson-corrected recursion.
template <class F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double integrate_segment(const F& f, double a, double b, double tol, int depth) {
    if (!(b > a)) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, depth);
}

}  // namespace

QuantileInterval quantiles(const DiscreteDistribution& dist, double alpha) {
    require_closed_level(alpha);
    const auto& values = dist.values();
    const auto& cum = dist.cumulative();
    const std::size_t n = values.size();

    ExtendedReal lower = ExtendedReal::neg_infinity();
    if (alpha > 0.0) {
        // first atom with F(x) >= alpha; cum.back() == 1 makes this total
        const auto it = std::lower_bound(cum.begin(), cum.end(), alpha);
        lower = ExtendedReal(values[static_cast<std::size_t>(it - cum.begin())]);
    }

    ExtendedReal upper(values[n - 1]);
    if (alpha < 1.0) {
        // last atom whose strictly-below mass is <= alpha; the strictly-
        // below masses are 0, cum[0], ..., cum[n-2]
        const auto it = std::upper_bound(cum.begin(), cum.end() - 1, alpha);
        const std::size_t j = static_cast<std::size_t>(it - cum.begin());
        upper = ExtendedReal(values[j]);
    }
    return QuantileInterval{lower, upper};
}

double quantile_lower(const DiscreteDistribution& dist, double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0) {
        raise(ErrorCode::InvalidLevel, "lower quantile level must lie in (0, 1]");
    }
    return quantiles(dist, alpha).lower.value();
}

ExtendedReal weighted_quantile_average(const DiscreteDistribution& dist,
                                       const WeightFunction& weight) {
    const auto& values = dist.values();
    const auto& cum = dist.cumulative();

    double acc = 0.0;
    double prev = 0.0;
    if (weight.has_antiderivative()) {
        double w_prev = weight.antiderivative(0.0);
        for (std::size_t k = 0; k < values.size(); ++k) {
            const double w_cur = weight.antiderivative(cum[k]);
            const double dw = w_cur - w_prev;
            if (dw < 0.0) {
                raise(ErrorCode::InvalidWeight,
                      "weight antiderivative decreases across a segment");
            }
            acc += values[k] * dw;
            w_prev = w_cur;
        }
        return ExtendedReal(acc);
    }
    for (std::size_t k = 0; k < values.size(); ++k) {
        const double mass = integrate_segment(
            [&weight](double g) { return weight(g); }, prev, cum[k], 1e-10, 40);
        acc += values[k] * mass;
        prev = cum[k];
    }
    return ExtendedReal(acc);
}

MomentStats moment_stats(const DiscreteDistribution& dist) {
    MomentStats stats;
    stats.mean = dist.mean();
    const double m2 = dist.expectation([](double v) { return v * v; });
    stats.variance = std::max(m2 - stats.mean * stats.mean, 0.0);
    if (stats.variance > 0.0) {
        const double mu = stats.mean;
        const double c3 = dist.expectation([mu](double v) {
            const double d = v - mu;
            return d * d * d;
        });
        const double c4 = dist.expectation([mu](double v) {
            const double d = v - mu;
            return d * d * d * d;
        });
        const double sd = std::sqrt(stats.variance);
        stats.skewness = c3 / (stats.variance * sd);
        stats.kurtosis = c4 / (stats.variance * stats.variance);
        stats.sharpe_ratio = stats.mean / sd;
    }
    return stats;
}

namespace {

// tau E[(Y - x)^+] - (1 - tau) E[(x - Y)^+], ascending accumulation.
double expectile_gap(const DiscreteDistribution& dist, double tau, double x) {
    double up = 0.0;
    double down = 0.0;
    const auto& values = dist.values();
    const auto& masses = dist.masses();
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = values[i] - x;
        if (d > 0.0) {
            up += masses[i] * d;
        } else {
            down += masses[i] * (-d);
        }
    }
    return tau * up - (1.0 - tau) * down;
}

}  // namespace

double expectile(const DiscreteDistribution& dist, double tau) {
    require_open_level(tau, "expectile level");
    const auto& values = dist.values();
    const std::size_t n = values.size();

    // g is continuous, strictly decreasing and piecewise linear with kinks
    // only at atoms, g(min) >= 0 >= g(max); locate the sign change and
    // solve the linear segment exactly.
    double g_prev = expectile_gap(dist, tau, values[0]);
    if (g_prev <= 0.0) return values[0];
    for (std::size_t k = 1; k < n; ++k) {
        const double g_cur = expectile_gap(dist, tau, values[k]);
        if (g_cur <= 0.0) {
            if (g_cur == 0.0) return values[k];
            const double a = values[k - 1];
            const double b = values[k];
            return a + (b - a) * (g_prev / (g_prev - g_cur));
        }
        g_prev = g_cur;
    }
    return values[n - 1];
}

ComposedEvaluations composed_evaluations(const DiscreteDistribution& dist, double t) {
    if (!std::isfinite(t)) {
        raise(ErrorCode::NonFiniteValue, "evaluation point is not finite");
    }
    const ProbeResult p = dist.probe(t);
    // upper tail stored as 1 - F(t): the triple then sums to exactly 1.0
    // in the association lower + point + upper.
    return ComposedEvaluations{1.0 - p.cdf, p.cdf_left, p.point};
}

DiscreteDistribution covar_conditional(const BivariateDiscreteDistribution& joint,
                                       double beta) {
    require_open_level(beta, "conditioning level");
    const auto [x_law, y_law] = marginals(joint);
    (void)y_law;
    const double v = quantile_lower(x_law, beta);
    const ProbeResult px = x_law.probe(v);
    const double tail_mass = 1.0 - px.cdf;          // P_X((v, inf))
    double coef = (1.0 - beta) - tail_mass;         // mathematically >= 0
    if (coef < 0.0) coef = 0.0;

    std::map<double, double> tail_by_y;
    std::map<double, double> at_v_by_y;
    for (const auto& a : joint.atoms()) {
        if (a.x > v) {
            tail_by_y[a.y] += a.mass;
        } else if (a.x == v) {
            at_v_by_y[a.y] += a.mass;
        }
    }

    std::map<double, double> raw;
    const double denom = 1.0 - beta;
    for (const auto& [y, m] : tail_by_y) raw[y] += m / denom;
    if (px.point > 0.0 && coef > 0.0) {
        const double fraction = coef / px.point;  // share of the boundary atom
        for (const auto& [y, m] : at_v_by_y) raw[y] += fraction * m / denom;
    }

    std::vector<RawAtom> atoms;
    double total = 0.0;
    for (const auto& [y, m] : raw) {
        if (m > 0.0) {
            atoms.push_back({y, m});
            total += m;
        }
    }
    if (atoms.empty()) {
        raise(ErrorCode::EmptyDistribution, "conditional tail law has no mass");
    }
    if (std::abs(total - 1.0) > 1e-12) {
        raise(ErrorCode::MassNotNormalized,
              "conditional tail masses drifted from 1 beyond 1e-12");
    }
    return DiscreteDistribution::canonicalize(atoms);
}

CoRiskMeasures covar_coes(const BivariateDiscreteDistribution& joint,
                          double alpha, double beta) {
    require_open_level(alpha, "risk level");
    const DiscreteDistribution eta = covar_conditional(joint, beta);
    const double covar = quantile_lower(eta, alpha);
    const double coes =
        weighted_quantile_average(eta, WeightFunction::es_upper(alpha)).value();
    return CoRiskMeasures{covar, coes};
}

}  // namespace elicit
