#include "elicit/elicitation.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace elicit {

namespace {

// Neumaier-compensated accumulator; used where slope signs near a flat
// minimum must not drown in rounding noise.
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

// E[L(b, Y) - L(a, Y)] in one compensated pass; the per-term difference
// keeps the magnitude at O(b - a) instead of O(L).
double segment_delta(const LossFunction& loss, const DiscreteDistribution& dist,
                     double a, double b) {
    CompensatedSum acc;
    const auto& values = dist.values();
    const auto& masses = dist.masses();
    for (std::size_t i = 0; i < values.size(); ++i) {
        acc.add(masses[i] * (loss(b, values[i]) - loss(a, values[i])));
    }
    return acc.value();
}

double expected_grad(const LossFunction& loss, const DiscreteDistribution& dist,
                     double a) {
    double acc = 0.0;
    const auto& values = dist.values();
    const auto& masses = dist.masses();
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double g = loss.grad_a(a, values[i]);
        if (std::isnan(g)) {
            raise(ErrorCode::NonFiniteValue, "loss derivative is NaN on support");
        }
        acc += masses[i] * g;
    }
    return acc;
}

// Landscape sanity sweep: expected loss must fall toward the reported
// interval, stay flat on it and rise after it. Raises ShapeViolation when
// the declared shape tag lied.
void shape_sweep(const LossFunction& loss, const DiscreteDistribution& dist,
                 double lo, double hi, const MinimizerInterval& interval) {
    if (!(hi > lo)) return;
    constexpr int kPoints = 256;
    std::vector<double> at(kPoints);
    std::vector<double> val(kPoints);
    double max_abs = std::abs(interval.bayes_risk);
    for (int i = 0; i < kPoints; ++i) {
        at[i] = lo + (hi - lo) * static_cast<double>(i) / (kPoints - 1);
        val[i] = expected_loss(loss, at[i], dist);
        max_abs = std::max(max_abs, std::abs(val[i]));
    }
    const double tol = 1e-10 * (1.0 + max_abs);
    for (int i = 0; i + 1 < kPoints; ++i) {
        if (at[i + 1] <= interval.t_min && val[i] < val[i + 1] - tol) {
            raise(ErrorCode::ShapeViolation,
                  "expected loss rises left of the minimizer interval");
        }
        if (at[i] >= interval.t_max && val[i + 1] < val[i] - tol) {
            raise(ErrorCode::ShapeViolation,
                  "expected loss falls right of the minimizer interval");
        }
    }
    for (int i = 0; i < kPoints; ++i) {
        if (at[i] >= interval.t_min && at[i] <= interval.t_max &&
            std::abs(val[i] - interval.bayes_risk) > tol) {
            raise(ErrorCode::ShapeViolation,
                  "expected loss is not flat on the minimizer interval");
        }
    }
}

std::vector<double> candidate_actions(const LossFunction& loss,
                                      const DiscreteDistribution& dist) {
    std::vector<double> cands = loss.breakpoints(dist.values());
    cands.insert(cands.end(), dist.values().begin(), dist.values().end());
    const ActionDomain& dom = loss.domain();
    if (std::isfinite(dom.lo)) cands.push_back(dom.lo);
    if (std::isfinite(dom.hi)) cands.push_back(dom.hi);
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    std::erase_if(cands, [&dom](double a) { return !dom.contains(a); });
    return cands;
}

MinimizerInterval minimize_piecewise_linear(const LossFunction& loss,
                                            const DiscreteDistribution& dist) {
    const std::vector<double> cands = candidate_actions(loss, dist);
    if (cands.empty()) {
        raise(ErrorCode::Unbracketed, "no candidate action lies in the domain");
    }
    const std::size_t m = cands.size();
    MinimizerInterval interval{cands.front(), cands.back(), 0.0};
    if (m > 1) {
        std::vector<double> slopes(m - 1);
        double scale = 0.0;
        for (std::size_t k = 0; k + 1 < m; ++k) {
            slopes[k] = segment_delta(loss, dist, cands[k], cands[k + 1]) /
                        (cands[k + 1] - cands[k]);
            scale = std::max(scale, std::abs(slopes[k]));
        }
        const double tol = 1e-10 * (1.0 + scale);
        std::ptrdiff_t last_neg = -1;
        std::ptrdiff_t first_pos = -1;
        for (std::size_t k = 0; k + 1 < m; ++k) {
            if (slopes[k] < -tol) last_neg = static_cast<std::ptrdiff_t>(k);
            if (first_pos < 0 && slopes[k] > tol) {
                first_pos = static_cast<std::ptrdiff_t>(k);
            }
        }
        interval.t_min = last_neg >= 0 ? cands[static_cast<std::size_t>(last_neg) + 1]
                                       : cands.front();
        interval.t_max = first_pos >= 0 ? cands[static_cast<std::size_t>(first_pos)]
                                        : cands.back();
        if (interval.t_min > interval.t_max) {
            raise(ErrorCode::ShapeViolation,
                  "slope signs are not consistent with a convex landscape");
        }
    }
    interval.bayes_risk = expected_loss(loss, interval.t_min, dist);
    const double at_max = expected_loss(loss, interval.t_max, dist);
    if (std::abs(at_max - interval.bayes_risk) >
        1e-10 * (1.0 + std::max(std::abs(at_max), std::abs(interval.bayes_risk)))) {
        raise(ErrorCode::ShapeViolation,
              "expected loss differs across the reported minimizer interval");
    }
    const double span = cands.back() - cands.front();
    const ActionDomain& dom = loss.domain();
    shape_sweep(loss, dist,
                std::max(dom.lo, cands.front() - 0.5 * (1.0 + span)),
                std::min(dom.hi, cands.back() + 0.5 * (1.0 + span)), interval);
    return interval;
}

MinimizerInterval minimize_smooth_convex(const LossFunction& loss,
                                         const DiscreteDistribution& dist) {
    const ActionDomain& dom = loss.domain();
    const double hull_span = dist.max_value() - dist.min_value() + 2.0;
    double lo = std::max(dom.lo, dist.min_value() - 1.0);
    double hi = std::min(dom.hi, dist.max_value() + 1.0);
    const double expand_limit = std::ldexp(hull_span, 40);  // 2^40 spans

    // Expand left until the derivative confirms descent into the bracket.
    double step = hull_span;
    while (expected_grad(loss, dist, lo) > 0.0) {
        if (lo <= dom.lo) {
            // Rising at the left domain edge: the edge is the minimizer.
            MinimizerInterval interval{lo, lo, expected_loss(loss, lo, dist)};
            shape_sweep(loss, dist, lo, hi, interval);
            return interval;
        }
        if (step > expand_limit) {
            raise(ErrorCode::Unbracketed,
                  "no descent bracket found after geometric expansion");
        }
        lo = std::max(dom.lo, lo - step);
        step *= 2.0;
    }
    step = hull_span;
    while (expected_grad(loss, dist, hi) < 0.0) {
        if (hi >= dom.hi) {
            MinimizerInterval interval{hi, hi, expected_loss(loss, hi, dist)};
            shape_sweep(loss, dist, lo, hi, interval);
            return interval;
        }
        if (step > expand_limit) {
            raise(ErrorCode::Unbracketed,
                  "no ascent bracket found after geometric expansion");
        }
        hi = std::min(dom.hi, hi + step);
        step *= 2.0;
    }

    const double bracket_lo = lo;
    const double bracket_hi = hi;
    // Bisect the derivative sign well below the contracted tolerance so
    // dual-route agreement checks have headroom.
    const double tol = 1e-12 * (1.0 + (bracket_hi - bracket_lo));
    for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double g = expected_grad(loss, dist, mid);
        if (g < 0.0) {
            lo = mid;
        } else if (g > 0.0) {
            hi = mid;
        } else {
            lo = hi = mid;
        }
    }
    const double t = 0.5 * (lo + hi);
    MinimizerInterval interval{t, t, expected_loss(loss, t, dist)};
    shape_sweep(loss, dist, bracket_lo, bracket_hi, interval);
    return interval;
}

MinimizerInterval minimize_general(const LossFunction& loss,
                                   const DiscreteDistribution& dist) {
    const ActionDomain& dom = loss.domain();
    double lo = std::max(dom.lo, dist.min_value() - 1.0);
    double hi = std::min(dom.hi, dist.max_value() + 1.0);
    if (!(hi > lo)) {
        raise(ErrorCode::Unbracketed, "degenerate search interval");
    }
    const double span0 = hi - lo;
    const double tol = 1e-12 * (1.0 + span0);

    // Golden-section descent; quasi-convexity is asserted by the shape tag
    // and re-checked by the sweep afterwards.
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = expected_loss(loss, x1, dist);
    double f2 = expected_loss(loss, x2, dist);
    for (int iter = 0; iter < 400 && hi - lo > tol; ++iter) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = expected_loss(loss, x1, dist);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = expected_loss(loss, x2, dist);
        }
    }
    const double t_hat = 0.5 * (lo + hi);
    const double bayes = expected_loss(loss, t_hat, dist);
    const double vtol = 1e-10 * (1.0 + std::abs(bayes));

    // Flat-set boundaries: the loss is monotone outside the minimizer
    // interval, so "within vtol of the Bayes risk" is a one-sided predicate.
    double left_lo = std::max(dom.lo, dist.min_value() - 1.0);
    double left_hi = t_hat;
    if (expected_loss(loss, left_lo, dist) > bayes + vtol) {
        for (int iter = 0; iter < 100 && left_hi - left_lo > tol; ++iter) {
            const double mid = 0.5 * (left_lo + left_hi);
            if (expected_loss(loss, mid, dist) <= bayes + vtol) {
                left_hi = mid;
            } else {
                left_lo = mid;
            }
        }
    } else {
        left_hi = left_lo;
    }
    double right_lo = t_hat;
    double right_hi = std::min(dom.hi, dist.max_value() + 1.0);
    if (expected_loss(loss, right_hi, dist) > bayes + vtol) {
        for (int iter = 0; iter < 100 && right_hi - right_lo > tol; ++iter) {
            const double mid = 0.5 * (right_lo + right_hi);
            if (expected_loss(loss, mid, dist) <= bayes + vtol) {
                right_lo = mid;
            } else {
                right_hi = mid;
            }
        }
    } else {
        right_lo = right_hi;
    }
    MinimizerInterval interval{left_hi, right_lo, bayes};
    shape_sweep(loss, dist, std::max(dom.lo, dist.min_value() - 1.0),
                std::min(dom.hi, dist.max_value() + 1.0), interval);
    return interval;
}

}  // namespace

double expected_loss(const LossFunction& loss, double a,
                     const DiscreteDistribution& dist) {
    if (!loss.domain().contains(a)) {
        raise(ErrorCode::ActionOutOfDomain, "action lies outside the loss domain");
    }
    double acc = 0.0;
    const auto& values = dist.values();
    const auto& masses = dist.masses();
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double l = loss(a, values[i]);
        if (!std::isfinite(l)) {
            raise(ErrorCode::NonFiniteValue, "loss is not finite on support");
        }
        acc += masses[i] * l;
    }
    return acc;
}

MinimizerInterval minimizer_interval(const LossFunction& loss,
                                     const DiscreteDistribution& dist) {
    switch (loss.shape()) {
        case LossShape::piecewise_linear_in_a:
            return minimize_piecewise_linear(loss, dist);
        case LossShape::smooth_convex_in_a:
            return minimize_smooth_convex(loss, dist);
        case LossShape::general_continuous:
            return minimize_general(loss, dist);
    }
    raise(ErrorCode::InvalidParameter, "unknown loss shape");
}

Identification Identification::quantile(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        raise(ErrorCode::InvalidLevel, "quantile level must lie strictly in (0, 1)");
    }
    return Identification(Kind::quantile, alpha);
}

Identification Identification::expectile(double tau) {
    if (!(tau > 0.0) || !(tau < 1.0)) {
        raise(ErrorCode::InvalidLevel, "expectile level must lie strictly in (0, 1)");
    }
    return Identification(Kind::expectile, tau);
}

double identification_residual(const Identification& id, double x,
                               const DiscreteDistribution& dist) {
    if (!std::isfinite(x)) {
        raise(ErrorCode::NonFiniteValue, "report point is not finite");
    }
    switch (id.kind()) {
        case Identification::Kind::mean:
            return x - dist.mean();
        case Identification::Kind::quantile:
            return dist.probe(x).cdf - id.level();
        case Identification::Kind::expectile: {
            const double tau = id.level();
            double up = 0.0;
            double down = 0.0;
            const auto& values = dist.values();
            const auto& masses = dist.masses();
            for (std::size_t i = 0; i < values.size(); ++i) {
                const double d = x - values[i];
                if (d > 0.0) {
                    down += masses[i] * d;
                } else {
                    up += masses[i] * (-d);
                }
            }
            return (1.0 - tau) * down - tau * up;
        }
    }
    raise(ErrorCode::InvalidParameter, "unknown identification kind");
}

bool consistency_check(const LossFunction& loss, double t,
                       const DiscreteDistribution& dist,
                       std::span<const double> grid) {
    const double at_t = expected_loss(loss, t, dist);
    for (double a : grid) {
        if (at_t > expected_loss(loss, a, dist) + 1e-10) {
            return false;
        }
    }
    return true;
}

}  // namespace elicit
