#include "elicit/loss.hpp"

#include <cmath>
#include <utility>

namespace elicit {

namespace {

void require_open_level(double level, const char* what) {
    if (!(level > 0.0) || !(level < 1.0)) {
        raise(ErrorCode::InvalidLevel, std::string(what) + " must lie strictly in (0, 1)");
    }
}

}  // namespace

LossFunction::LossFunction(std::string name, LossShape shape, Eval evaluate,
                           Eval grad_a, ActionDomain domain, Breakpoints breakpoints)
    : name_(std::move(name)),
      shape_(shape),
      evaluate_(std::move(evaluate)),
      grad_a_(std::move(grad_a)),
      domain_(domain),
      breakpoints_(std::move(breakpoints)) {
    if (!evaluate_) {
        raise(ErrorCode::InvalidParameter, "loss function has no evaluator");
    }
    if (!(domain_.lo < domain_.hi)) {
        raise(ErrorCode::InvalidParameter, "action domain is empty");
    }
}

double LossFunction::grad_a(double a, double y) const {
    if (grad_a_) return grad_a_(a, y);
    const double h = 1e-7 * (1.0 + std::abs(a));
    return (evaluate_(a + h, y) - evaluate_(a - h, y)) / (2.0 * h);
}

std::vector<double> LossFunction::breakpoints(std::span<const double> support) const {
    if (breakpoints_) return breakpoints_(support);
    return std::vector<double>(support.begin(), support.end());
}

namespace loss {

LossFunction squared() {
    return LossFunction(
        "squared", LossShape::smooth_convex_in_a,
        [](double a, double y) {
            const double d = a - y;
            return d * d;
        },
        [](double a, double y) { return 2.0 * (a - y); });
}

LossFunction pinball(double alpha) {
    require_open_level(alpha, "pinball level");
    return LossFunction(
        "pinball", LossShape::piecewise_linear_in_a,
        [alpha](double a, double y) {
            return ((y <= a ? 1.0 : 0.0) - alpha) * (a - y);
        });
}

LossFunction asymmetric_squared(double tau) {
    require_open_level(tau, "expectile level");
    return LossFunction(
        "asymmetric_squared", LossShape::smooth_convex_in_a,
        [tau](double a, double y) {
            const double d = a - y;
            const double w = std::abs((y <= a ? 1.0 : 0.0) - tau);
            return w * d * d;
        },
        [tau](double a, double y) {
            const double w = std::abs((y <= a ? 1.0 : 0.0) - tau);
            return 2.0 * w * (a - y);
        });
}

LossFunction shifted_asymmetric_squared(double tau) {
    require_open_level(tau, "expectile level");
    const LossFunction base = asymmetric_squared(tau);
    return LossFunction(
        "shifted_asymmetric_squared", LossShape::smooth_convex_in_a,
        [base](double a, double y) { return base(a, y) - base(0.0, y); },
        [base](double a, double y) { return base.grad_a(a, y); });
}

LossFunction generalized_quantile(double tau,
                                  std::function<double(double)> phi1,
                                  std::function<double(double)> phi2,
                                  std::function<double(double)> dphi1,
                                  std::function<double(double)> dphi2) {
    require_open_level(tau, "quantile level");
    if (!phi1 || !phi2) {
        raise(ErrorCode::InvalidParameter, "generalized quantile loss needs both phi");
    }
    const bool smooth = static_cast<bool>(dphi1) && static_cast<bool>(dphi2);
    LossFunction::Eval grad;
    if (smooth) {
        grad = [tau, dphi1, dphi2](double a, double y) {
            return y <= a ? (1.0 - tau) * dphi1(a - y) : -tau * dphi2(y - a);
        };
    }
    return LossFunction(
        "generalized_quantile",
        smooth ? LossShape::smooth_convex_in_a : LossShape::general_continuous,
        [tau, phi1, phi2](double a, double y) {
            return y <= a ? (1.0 - tau) * phi1(a - y) : tau * phi2(y - a);
        },
        std::move(grad));
}

LossFunction power_generalized(double tau, double p) {
    require_open_level(tau, "quantile level");
    if (!(p >= 1.0) || !std::isfinite(p)) {
        raise(ErrorCode::InvalidExponent, "power exponent must be finite and >= 1");
    }
    if (p == 1.0) {
        // |u|^1 makes the landscape piecewise linear; identical to pinball.
        return LossFunction(
            "power_generalized", LossShape::piecewise_linear_in_a,
            [tau](double a, double y) {
                return y <= a ? (1.0 - tau) * (a - y) : tau * (y - a);
            });
    }
    return LossFunction(
        "power_generalized", LossShape::smooth_convex_in_a,
        [tau, p](double a, double y) {
            return y <= a ? (1.0 - tau) * std::pow(a - y, p)
                          : tau * std::pow(y - a, p);
        },
        [tau, p](double a, double y) {
            return y <= a ? (1.0 - tau) * p * std::pow(a - y, p - 1.0)
                          : -tau * p * std::pow(y - a, p - 1.0);
        });
}

LossFunction es_ru_loss(double alpha) {
    require_open_level(alpha, "shortfall level");
    const double w = 1.0 / (1.0 - alpha);
    return LossFunction(
        "es_ru_loss", LossShape::piecewise_linear_in_a,
        [w](double a, double y) {
            const double excess = y - a;
            return a + (excess > 0.0 ? w * excess : 0.0);
        });
}

}  // namespace loss

LossFunction make_loss(const LossSpec& spec) {
    const auto need = [&spec](const std::optional<double>& v, const char* what) {
        if (!v) {
            raise(ErrorCode::InvalidParameter,
                  "loss kind '" + spec.kind + "' needs parameter " + what);
        }
        return *v;
    };
    if (spec.kind == "squared") return loss::squared();
    if (spec.kind == "pinball") return loss::pinball(need(spec.alpha, "alpha"));
    if (spec.kind == "asymmetric_squared") {
        return loss::asymmetric_squared(need(spec.tau, "tau"));
    }
    if (spec.kind == "shifted_asymmetric_squared") {
        return loss::shifted_asymmetric_squared(need(spec.tau, "tau"));
    }
    if (spec.kind == "power_generalized") {
        return loss::power_generalized(need(spec.tau, "tau"), need(spec.p, "p"));
    }
    if (spec.kind == "es_ru_loss") return loss::es_ru_loss(need(spec.alpha, "alpha"));
    raise(ErrorCode::InvalidParameter, "unknown loss kind '" + spec.kind + "'");
}

}  // namespace elicit
