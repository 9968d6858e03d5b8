#pragma once

#include <limits>

namespace elicit {

/// A value in R together with the two infinities. NaN is not a member;
/// constructing from NaN raises NonFiniteValue. Quantile bounds use the
/// infinities for the boundary conventions at levels 0 and 1.
class ExtendedReal {
public:
    ExtendedReal() : v_(0.0) {}
    ExtendedReal(double v);  // implicit on purpose; rejects NaN

    static ExtendedReal neg_infinity() {
        return ExtendedReal(-std::numeric_limits<double>::infinity());
    }
    static ExtendedReal pos_infinity() {
        return ExtendedReal(std::numeric_limits<double>::infinity());
    }

    bool is_finite() const;
    /// Finite value; raises NonFiniteValue when infinite.
    double value() const;
    /// Underlying double, infinities included.
    double raw() const { return v_; }

    friend bool operator==(ExtendedReal a, ExtendedReal b) { return a.v_ == b.v_; }
    friend bool operator!=(ExtendedReal a, ExtendedReal b) { return a.v_ != b.v_; }
    friend bool operator<(ExtendedReal a, ExtendedReal b) { return a.v_ < b.v_; }
    friend bool operator<=(ExtendedReal a, ExtendedReal b) { return a.v_ <= b.v_; }
    friend bool operator>(ExtendedReal a, ExtendedReal b) { return a.v_ > b.v_; }
    friend bool operator>=(ExtendedReal a, ExtendedReal b) { return a.v_ >= b.v_; }

private:
    double v_;
};

}  // namespace elicit
