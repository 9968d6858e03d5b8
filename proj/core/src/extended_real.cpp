#include "elicit/extended_real.hpp"

#include <cmath>

#include "elicit/errors.hpp"

namespace elicit {

ExtendedReal::ExtendedReal(double v) : v_(v) {
    if (std::isnan(v)) {
        raise(ErrorCode::NonFiniteValue, "NaN is not an extended real value");
    }
}

bool ExtendedReal::is_finite() const { return std::isfinite(v_); }

double ExtendedReal::value() const {
    if (!is_finite()) {
        raise(ErrorCode::NonFiniteValue, "extended real value is infinite");
    }
    return v_;
}

}  // namespace elicit
