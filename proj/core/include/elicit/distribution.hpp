#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "elicit/errors.hpp"

namespace elicit {

/// Accepted absolute drift of an ingested mass total from 1.
inline constexpr double kMassTolerance = 1e-9;

struct RawAtom {
    double value;
    double mass;
};

/// Left limit, point mass and cdf of a distribution at one probe point.
/// cdf == cdf_left + point holds exactly as stored.
struct ProbeResult {
    double cdf_left;  // P((-inf, x))
    double point;     // P({x})
    double cdf;       // P((-inf, x])
};

/// Finitely supported probability measure on the reals in canonical form:
/// atom values strictly increasing, every stored mass strictly positive,
/// and the masses summing to exactly 1.0 when accumulated in ascending
/// order. Instances are immutable and safe to share across threads.
class DiscreteDistribution {
public:
    /// Sorts, merges duplicate values, drops zero masses and renormalizes.
    /// The ingested total must be within kMassTolerance of 1; after
    /// renormalization the ascending partial sums end at exactly 1.0, so
    /// canonicalizing the atoms of a canonical distribution is a bitwise
    /// no-op.
    static DiscreteDistribution canonicalize(std::span<const RawAtom> raw);
    static DiscreteDistribution canonicalize(std::initializer_list<RawAtom> raw);

    /// Empirical measure of a sample vector (equal weight per draw).
    static DiscreteDistribution from_samples(std::span<const double> samples);

    static DiscreteDistribution point_mass(double value);

    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& masses() const { return masses_; }
    /// Ascending prefix sums of the masses; back() == 1.0 exactly.
    const std::vector<double>& cumulative() const { return cum_; }
    double min_value() const { return values_.front(); }
    double max_value() const { return values_.back(); }
    std::vector<RawAtom> atoms() const;

    ProbeResult probe(double x) const;

    /// E[h(X)], accumulated in ascending value order. Raises NonFiniteValue
    /// if h is non-finite on a support point.
    template <class H>
    double expectation(H&& h) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < values_.size(); ++i) {
            const double hv = h(values_[i]);
            if (!std::isfinite(hv)) {
                raise(ErrorCode::NonFiniteValue,
                      "integrand is not finite at support point");
            }
            acc += masses_[i] * hv;
        }
        return acc;
    }

    double mean() const {
        return expectation([](double v) { return v; });
    }

private:
    DiscreteDistribution(std::vector<double> values, std::vector<double> masses);

    std::vector<double> values_;
    std::vector<double> masses_;
    std::vector<double> cum_;
};

/// Convex combination of component laws. Weights must be nonnegative and
/// sum to 1 within kMassTolerance.
DiscreteDistribution mixture(
    std::span<const std::pair<DiscreteDistribution, double>> components);

struct BivariateRawAtom {
    double x;
    double y;
    double mass;
};

/// Finitely supported law on R^2, canonical in the same sense as the
/// univariate case with atoms ordered lexicographically by (x, y).
class BivariateDiscreteDistribution {
public:
    struct Atom {
        double x;
        double y;
        double mass;
    };

    static BivariateDiscreteDistribution canonicalize(std::span<const BivariateRawAtom> raw);
    static BivariateDiscreteDistribution canonicalize(std::initializer_list<BivariateRawAtom> raw);

    std::size_t size() const { return atoms_.size(); }
    const std::vector<Atom>& atoms() const { return atoms_; }

private:
    explicit BivariateDiscreteDistribution(std::vector<Atom> atoms);

    std::vector<Atom> atoms_;
};

/// Product measure of two univariate laws (used heavily by tests of the
/// conditional tail map, where independence must collapse it).
BivariateDiscreteDistribution product_measure(const DiscreteDistribution& x_law,
                                              const DiscreteDistribution& y_law);

/// (X marginal, Y marginal).
std::pair<DiscreteDistribution, DiscreteDistribution> marginals(
    const BivariateDiscreteDistribution& joint);

}  // namespace elicit
