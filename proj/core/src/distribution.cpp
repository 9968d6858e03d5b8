#include "elicit/distribution.hpp"

#include <algorithm>
#include <cmath>

namespace elicit {

namespace {

// Renormalizes positive, value-merged masses so the ascending float sum
// lands on exactly 1.0: divide through by the ingested total, then replace
// the top mass by the complement of the prefix below it. The final
// addition prefix + (1 - prefix) rounds to 1.0 for any prefix in [0, 1],
// which pins the whole cumulative vector.
void renormalize_exact(std::vector<double>& masses, double total) {
    for (double& m : masses) m /= total;
    while (!masses.empty()) {
        double prefix = 0.0;
        for (std::size_t i = 0; i + 1 < masses.size(); ++i) prefix += masses[i];
        const double top = 1.0 - prefix;
        if (top > 0.0) {
            masses.back() = top;
            return;
        }
        // Top mass below resolvable residual; drop it and retry.
        masses.pop_back();
    }
    raise(ErrorCode::EmptyDistribution, "all masses vanished in renormalization");
}

}  // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<double> values,
                                           std::vector<double> masses)
    : values_(std::move(values)), masses_(std::move(masses)) {
    cum_.resize(masses_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < masses_.size(); ++i) {
        acc += masses_[i];
        cum_[i] = acc;
    }
}

DiscreteDistribution DiscreteDistribution::canonicalize(std::span<const RawAtom> raw) {
    if (raw.empty()) {
        raise(ErrorCode::EmptyDistribution, "no atoms supplied");
    }
    std::vector<RawAtom> atoms(raw.begin(), raw.end());
    for (const RawAtom& a : atoms) {
        if (!std::isfinite(a.value) || !std::isfinite(a.mass)) {
            raise(ErrorCode::NonFiniteValue, "atom value or mass is not finite");
        }
        if (a.mass < 0.0) {
            raise(ErrorCode::MassNotNormalized, "atom mass is negative");
        }
    }
    std::stable_sort(atoms.begin(), atoms.end(),
                     [](const RawAtom& a, const RawAtom& b) { return a.value < b.value; });

    std::vector<double> values;
    std::vector<double> masses;
    values.reserve(atoms.size());
    masses.reserve(atoms.size());
    for (std::size_t i = 0; i < atoms.size();) {
        const double v = atoms[i].value;
        double m = 0.0;
        for (; i < atoms.size() && atoms[i].value == v; ++i) m += atoms[i].mass;
        if (m > 0.0) {
            values.push_back(v);
            masses.push_back(m);
        }
    }
    if (values.empty()) {
        raise(ErrorCode::EmptyDistribution, "no atom carries positive mass");
    }

    double total = 0.0;
    for (double m : masses) total += m;
    if (std::abs(total - 1.0) > kMassTolerance) {
        raise(ErrorCode::MassNotNormalized,
              "masses sum to " + std::to_string(total) + ", not 1");
    }
    if (total != 1.0) {
        renormalize_exact(masses, total);
        values.resize(masses.size());
    }
    return DiscreteDistribution(std::move(values), std::move(masses));
}

DiscreteDistribution DiscreteDistribution::canonicalize(std::initializer_list<RawAtom> raw) {
    return canonicalize(std::span<const RawAtom>(raw.begin(), raw.size()));
}

DiscreteDistribution DiscreteDistribution::from_samples(std::span<const double> samples) {
    if (samples.empty()) {
        raise(ErrorCode::EmptyDistribution, "no samples supplied");
    }
    const double w = 1.0 / static_cast<double>(samples.size());
    std::vector<RawAtom> atoms;
    atoms.reserve(samples.size());
    for (double s : samples) {
        if (!std::isfinite(s)) {
            raise(ErrorCode::NonFiniteValue, "sample is not finite");
        }
        atoms.push_back({s, w});
    }
    return canonicalize(atoms);
}

DiscreteDistribution DiscreteDistribution::point_mass(double value) {
    return canonicalize({{value, 1.0}});
}

std::vector<RawAtom> DiscreteDistribution::atoms() const {
    std::vector<RawAtom> out;
    out.reserve(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) {
        out.push_back({values_[i], masses_[i]});
    }
    return out;
}

ProbeResult DiscreteDistribution::probe(double x) const {
    if (std::isnan(x)) {
        raise(ErrorCode::NonFiniteValue, "probe point is NaN");
    }
    const auto it = std::lower_bound(values_.begin(), values_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - values_.begin());
    const double cdf_left = i == 0 ? 0.0 : cum_[i - 1];
    if (it != values_.end() && *it == x) {
        return ProbeResult{cdf_left, masses_[i], cum_[i]};
    }
    return ProbeResult{cdf_left, 0.0, cdf_left};
}

DiscreteDistribution mixture(
    std::span<const std::pair<DiscreteDistribution, double>> components) {
    if (components.empty()) {
        raise(ErrorCode::EmptyDistribution, "mixture of zero components");
    }
    double total_weight = 0.0;
    for (const auto& [component, weight] : components) {
        (void)component;
        if (!std::isfinite(weight)) {
            raise(ErrorCode::NonFiniteValue, "mixture weight is not finite");
        }
        if (weight < 0.0) {
            raise(ErrorCode::MassNotNormalized, "mixture weight is negative");
        }
        total_weight += weight;
    }
    if (std::abs(total_weight - 1.0) > kMassTolerance) {
        raise(ErrorCode::MassNotNormalized,
              "mixture weights sum to " + std::to_string(total_weight) + ", not 1");
    }
    std::vector<RawAtom> atoms;
    for (const auto& [component, weight] : components) {
        if (weight == 0.0) continue;
        for (std::size_t i = 0; i < component.size(); ++i) {
            atoms.push_back({component.values()[i], weight * component.masses()[i]});
        }
    }
    return DiscreteDistribution::canonicalize(atoms);
}

BivariateDiscreteDistribution::BivariateDiscreteDistribution(std::vector<Atom> atoms)
    : atoms_(std::move(atoms)) {}

BivariateDiscreteDistribution BivariateDiscreteDistribution::canonicalize(
    std::span<const BivariateRawAtom> raw) {
    if (raw.empty()) {
        raise(ErrorCode::EmptyDistribution, "no atoms supplied");
    }
    std::vector<Atom> atoms;
    atoms.reserve(raw.size());
    for (const BivariateRawAtom& a : raw) {
        if (!std::isfinite(a.x) || !std::isfinite(a.y) || !std::isfinite(a.mass)) {
            raise(ErrorCode::NonFiniteValue, "atom coordinate or mass is not finite");
        }
        if (a.mass < 0.0) {
            raise(ErrorCode::MassNotNormalized, "atom mass is negative");
        }
        atoms.push_back({a.x, a.y, a.mass});
    }
    std::stable_sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });

    std::vector<Atom> merged;
    merged.reserve(atoms.size());
    for (std::size_t i = 0; i < atoms.size();) {
        const double x = atoms[i].x;
        const double y = atoms[i].y;
        double m = 0.0;
        for (; i < atoms.size() && atoms[i].x == x && atoms[i].y == y; ++i) m += atoms[i].mass;
        if (m > 0.0) merged.push_back({x, y, m});
    }
    if (merged.empty()) {
        raise(ErrorCode::EmptyDistribution, "no atom carries positive mass");
    }

    double total = 0.0;
    for (const Atom& a : merged) total += a.mass;
    if (std::abs(total - 1.0) > kMassTolerance) {
        raise(ErrorCode::MassNotNormalized,
              "masses sum to " + std::to_string(total) + ", not 1");
    }
    if (total != 1.0) {
        std::vector<double> masses;
        masses.reserve(merged.size());
        for (const Atom& a : merged) masses.push_back(a.mass);
        renormalize_exact(masses, total);
        merged.resize(masses.size());
        for (std::size_t i = 0; i < merged.size(); ++i) merged[i].mass = masses[i];
    }
    return BivariateDiscreteDistribution(std::move(merged));
}

BivariateDiscreteDistribution BivariateDiscreteDistribution::canonicalize(
    std::initializer_list<BivariateRawAtom> raw) {
    return canonicalize(std::span<const BivariateRawAtom>(raw.begin(), raw.size()));
}

BivariateDiscreteDistribution product_measure(const DiscreteDistribution& x_law,
                                              const DiscreteDistribution& y_law) {
    std::vector<BivariateRawAtom> atoms;
    atoms.reserve(x_law.size() * y_law.size());
    for (std::size_t i = 0; i < x_law.size(); ++i) {
        for (std::size_t j = 0; j < y_law.size(); ++j) {
            atoms.push_back({x_law.values()[i], y_law.values()[j],
                             x_law.masses()[i] * y_law.masses()[j]});
        }
    }
    return BivariateDiscreteDistribution::canonicalize(atoms);
}

std::pair<DiscreteDistribution, DiscreteDistribution> marginals(
    const BivariateDiscreteDistribution& joint) {
    std::vector<RawAtom> x_atoms;
    std::vector<RawAtom> y_atoms;
    x_atoms.reserve(joint.size());
    y_atoms.reserve(joint.size());
    for (const auto& a : joint.atoms()) {
        x_atoms.push_back({a.x, a.mass});
        y_atoms.push_back({a.y, a.mass});
    }
    return {DiscreteDistribution::canonicalize(x_atoms),
            DiscreteDistribution::canonicalize(y_atoms)};
}

}  // namespace elicit
