#pragma once

#include <string>
#include <utility>
#include <vector>

#include "elicit/distribution.hpp"
#include "elicit/prediction_space.hpp"

namespace elicit::io {

/// Ordered JSON-like document tree used for all CLI emission. Numbers are
/// rendered with 17 significant digits so that every double round-trips
/// bitwise; +-infinity renders as the strings "inf"/"-inf" (bare words in
/// CSV cells). Key order is insertion order, which makes emission
/// deterministic byte for byte.
class Doc {
public:
    enum class Kind { null, boolean, number, string, array, object };

    Doc() : kind_(Kind::null) {}

    static Doc boolean(bool b);
    static Doc number(double v);
    static Doc string(std::string s);
    static Doc array();
    static Doc object();

    Kind kind() const { return kind_; }
    bool as_bool() const { return bool_; }
    double as_number() const { return num_; }
    const std::string& as_string() const { return str_; }
    const std::vector<Doc>& items() const { return items_; }
    const std::vector<std::pair<std::string, Doc>>& fields() const { return fields_; }

    Doc& add(const std::string& key, Doc value);  // object field
    Doc& push(Doc value);                         // array element

private:
    Kind kind_;
    bool bool_ = false;
    double num_ = 0.0;
    std::string str_;
    std::vector<Doc> items_;
    std::vector<std::pair<std::string, Doc>> fields_;
};

/// Finite double with 17 significant digits, "inf"/"-inf" otherwise.
std::string format_number(double v);

std::string to_json(const Doc& doc);
std::string to_csv(const Doc& doc);
std::string to_table(const Doc& doc);

/// {"atoms": [{"x": ..., "p": ...}, ...]}
DiscreteDistribution parse_distribution_json(const std::string& text);
Doc distribution_doc(const DiscreteDistribution& dist);

/// {"atoms": [{"x": ..., "y": ..., "p": ...}, ...]}
BivariateDiscreteDistribution parse_bivariate_json(const std::string& text);

/// Either one distribution object or {"forecasts": [...]} / a bare array.
std::vector<DiscreteDistribution> parse_forecasts_json(const std::string& text);

/// {"outcomes": [{"label": ..., "p": ..., "y": ...}, ...],
///  "partitions": {"name": {"label": "cell", ...}, ...}}
FinitePredictionSpace parse_space_json(const std::string& text);

/// One numeric value per line; a first line whose leading field is not
/// numeric is treated as a header and skipped. Blank lines are ignored.
std::vector<double> parse_samples_csv(const std::string& text);

/// Two comma-separated numeric values per line, same header rule.
std::vector<std::pair<double, double>> parse_bivariate_samples_csv(const std::string& text);

/// Whole file as a string; ParseError when unreadable.
std::string read_file(const std::string& path);

}  // namespace elicit::io
