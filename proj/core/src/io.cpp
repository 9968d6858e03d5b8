#include "elicit/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

#include "elicit/errors.hpp"

#include <json.hpp>

namespace elicit::io {

namespace {

using nlohmann::json;

json parse_json(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        raise(ErrorCode::ParseError,
              std::string(what) + ": " + e.what());
    }
}

double number_field(const json& node, const char* key, const char* where) {
    const auto it = node.find(key);
    if (it == node.end() || !it->is_number()) {
        raise(ErrorCode::SchemaError, std::string(where) + " needs a numeric \"" +
                                          key + "\" field");
    }
    return it->get<double>();
}

std::string string_field(const json& node, const char* key, const char* where) {
    const auto it = node.find(key);
    if (it == node.end() || !it->is_string()) {
        raise(ErrorCode::SchemaError, std::string(where) + " needs a string \"" +
                                          key + "\" field");
    }
    return it->get<std::string>();
}

DiscreteDistribution distribution_from_json(const json& node) {
    if (!node.is_object() || !node.contains("atoms") || !node["atoms"].is_array()) {
        raise(ErrorCode::SchemaError,
              "distribution must be an object with an \"atoms\" array");
    }
    std::vector<RawAtom> atoms;
    atoms.reserve(node["atoms"].size());
    for (const json& a : node["atoms"]) {
        if (!a.is_object()) {
            raise(ErrorCode::SchemaError, "each atom must be an object");
        }
        atoms.push_back(RawAtom{number_field(a, "x", "atom"),
                                number_field(a, "p", "atom")});
    }
    return DiscreteDistribution::canonicalize(atoms);
}

void append_escaped(std::string& out, const std::string& s) {
    out += '"';
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += static_cast<char>(c);
                }
        }
    }
    out += '"';
}

void write_json(std::string& out, const Doc& doc, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string pad_in(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (doc.kind()) {
        case Doc::Kind::null:
            out += "null";
            return;
        case Doc::Kind::boolean:
            out += doc.as_bool() ? "true" : "false";
            return;
        case Doc::Kind::number:
            // Non-finite doubles have no JSON literal; emit them as the
            // strings "inf"/"-inf" so the value survives serialization.
            if (std::isfinite(doc.as_number())) {
                out += format_number(doc.as_number());
            } else {
                append_escaped(out, format_number(doc.as_number()));
            }
            return;
        case Doc::Kind::string:
            append_escaped(out, doc.as_string());
            return;
        case Doc::Kind::array: {
            if (doc.items().empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < doc.items().size(); ++i) {
                out += pad_in;
                write_json(out, doc.items()[i], indent + 1);
                if (i + 1 < doc.items().size()) out += ',';
                out += '\n';
            }
            out += pad;
            out += ']';
            return;
        }
        case Doc::Kind::object: {
            if (doc.fields().empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            for (std::size_t i = 0; i < doc.fields().size(); ++i) {
                out += pad_in;
                append_escaped(out, doc.fields()[i].first);
                out += ": ";
                write_json(out, doc.fields()[i].second, indent + 1);
                if (i + 1 < doc.fields().size()) out += ',';
                out += '\n';
            }
            out += pad;
            out += '}';
            return;
        }
    }
}

bool is_scalar(const Doc& d) {
    return d.kind() == Doc::Kind::null || d.kind() == Doc::Kind::boolean ||
           d.kind() == Doc::Kind::number || d.kind() == Doc::Kind::string;
}

std::string scalar_text(const Doc& d) {
    switch (d.kind()) {
        case Doc::Kind::null: return "";
        case Doc::Kind::boolean: return d.as_bool() ? "true" : "false";
        case Doc::Kind::number: return format_number(d.as_number());
        case Doc::Kind::string: return d.as_string();
        default:
            raise(ErrorCode::SchemaError, "nested value is not a scalar");
    }
}

// Rows of a table: an array of flat objects sharing the first row's keys.
bool is_row_array(const Doc& d) {
    if (d.kind() != Doc::Kind::array || d.items().empty()) return false;
    for (const Doc& item : d.items()) {
        if (item.kind() != Doc::Kind::object) return false;
        for (const auto& [key, value] : item.fields()) {
            (void)key;
            if (!is_scalar(value)) return false;
        }
    }
    return true;
}

std::vector<std::vector<std::string>> tabulate(const Doc& doc) {
    std::vector<std::vector<std::string>> rows;
    if (is_scalar(doc)) {
        rows.push_back({scalar_text(doc)});
        return rows;
    }
    if (doc.kind() == Doc::Kind::object) {
        std::vector<std::string> header;
        std::vector<std::string> line;
        for (const auto& [key, value] : doc.fields()) {
            if (!is_scalar(value)) {
                raise(ErrorCode::SchemaError,
                      "document is too nested for tabular output");
            }
            header.push_back(key);
            line.push_back(scalar_text(value));
        }
        rows.push_back(std::move(header));
        rows.push_back(std::move(line));
        return rows;
    }
    if (is_row_array(doc)) {
        std::vector<std::string> header;
        for (const auto& [key, value] : doc.items().front().fields()) {
            (void)value;
            header.push_back(key);
        }
        rows.push_back(header);
        for (const Doc& item : doc.items()) {
            std::vector<std::string> line;
            for (const std::string& key : header) {
                bool found = false;
                for (const auto& [k, v] : item.fields()) {
                    if (k == key) {
                        line.push_back(scalar_text(v));
                        found = true;
                        break;
                    }
                }
                if (!found) line.push_back("");
            }
            rows.push_back(std::move(line));
        }
        return rows;
    }
    if (doc.kind() == Doc::Kind::array) {
        for (const Doc& item : doc.items()) {
            if (!is_scalar(item)) {
                raise(ErrorCode::SchemaError,
                      "document is too nested for tabular output");
            }
            rows.push_back({scalar_text(item)});
        }
        return rows;
    }
    raise(ErrorCode::SchemaError, "document is too nested for tabular output");
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string current;
    for (char c : text) {
        if (c == '\n') {
            if (!current.empty() && current.back() == '\r') current.pop_back();
            lines.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    if (!current.empty() && current.back() == '\r') current.pop_back();
    if (!current.empty()) lines.push_back(current);
    return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    fields.push_back(current);
    for (std::string& f : fields) {
        const auto begin = f.find_first_not_of(" \t");
        const auto end = f.find_last_not_of(" \t");
        f = begin == std::string::npos ? "" : f.substr(begin, end - begin + 1);
    }
    return fields;
}

bool parse_double(const std::string& field, double& out) {
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && !field.empty();
}

std::vector<std::vector<double>> parse_numeric_csv(const std::string& text,
                                                   std::size_t columns) {
    std::vector<std::vector<double>> rows;
    const std::vector<std::string> lines = split_lines(text);
    bool first_content = true;
    for (std::size_t li = 0; li < lines.size(); ++li) {
        const std::string& line = lines[li];
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const std::vector<std::string> fields = split_fields(line);
        double probe = 0.0;
        if (first_content && !parse_double(fields.front(), probe)) {
            first_content = false;  // header line
            continue;
        }
        first_content = false;
        if (fields.size() != columns) {
            raise(ErrorCode::ParseError,
                  "line " + std::to_string(li + 1) + ": expected " +
                      std::to_string(columns) + " value(s), got " +
                      std::to_string(fields.size()));
        }
        std::vector<double> row(columns);
        for (std::size_t c = 0; c < columns; ++c) {
            if (!parse_double(fields[c], row[c])) {
                raise(ErrorCode::ParseError, "line " + std::to_string(li + 1) +
                                                 ": field " + std::to_string(c + 1) +
                                                 " is not a number");
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

Doc Doc::boolean(bool b) {
    Doc d;
    d.kind_ = Kind::boolean;
    d.bool_ = b;
    return d;
}

Doc Doc::number(double v) {
    Doc d;
    d.kind_ = Kind::number;
    d.num_ = v;
    return d;
}

Doc Doc::string(std::string s) {
    Doc d;
    d.kind_ = Kind::string;
    d.str_ = std::move(s);
    return d;
}

Doc Doc::array() {
    Doc d;
    d.kind_ = Kind::array;
    return d;
}

Doc Doc::object() {
    Doc d;
    d.kind_ = Kind::object;
    return d;
}

Doc& Doc::add(const std::string& key, Doc value) {
    if (kind_ != Kind::object) {
        raise(ErrorCode::SchemaError, "add() requires an object document");
    }
    fields_.emplace_back(key, std::move(value));
    return *this;
}

Doc& Doc::push(Doc value) {
    if (kind_ != Kind::array) {
        raise(ErrorCode::SchemaError, "push() requires an array document");
    }
    items_.push_back(std::move(value));
    return *this;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] =
        std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    if (ec != std::errc()) {
        raise(ErrorCode::NonFiniteValue, "number cannot be formatted");
    }
    return std::string(buf, ptr);
}

std::string to_json(const Doc& doc) {
    std::string out;
    write_json(out, doc, 0);
    out += '\n';
    return out;
}

std::string to_csv(const Doc& doc) {
    std::string out;
    for (const auto& row : tabulate(doc)) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += row[i];
        }
        out += '\n';
    }
    return out;
}

std::string to_table(const Doc& doc) {
    const auto rows = tabulate(doc);
    std::vector<std::size_t> width;
    for (const auto& row : rows) {
        if (width.size() < row.size()) width.resize(row.size(), 0);
        for (std::size_t i = 0; i < row.size(); ++i) {
            width[i] = std::max(width[i], row[i].size());
        }
    }
    std::string out;
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += "  ";
            out += row[i];
            if (i + 1 < row.size()) {
                out.append(width[i] - row[i].size(), ' ');
            }
        }
        out += '\n';
    }
    return out;
}

DiscreteDistribution parse_distribution_json(const std::string& text) {
    return distribution_from_json(parse_json(text, "distribution"));
}

Doc distribution_doc(const DiscreteDistribution& dist) {
    Doc atoms = Doc::array();
    for (std::size_t i = 0; i < dist.size(); ++i) {
        Doc atom = Doc::object();
        atom.add("x", Doc::number(dist.values()[i]));
        atom.add("p", Doc::number(dist.masses()[i]));
        atoms.push(std::move(atom));
    }
    Doc doc = Doc::object();
    doc.add("atoms", std::move(atoms));
    return doc;
}

BivariateDiscreteDistribution parse_bivariate_json(const std::string& text) {
    const json root = parse_json(text, "bivariate distribution");
    if (!root.is_object() || !root.contains("atoms") || !root["atoms"].is_array()) {
        raise(ErrorCode::SchemaError,
              "bivariate distribution must be an object with an \"atoms\" array");
    }
    std::vector<BivariateRawAtom> atoms;
    atoms.reserve(root["atoms"].size());
    for (const json& a : root["atoms"]) {
        if (!a.is_object()) {
            raise(ErrorCode::SchemaError, "each atom must be an object");
        }
        atoms.push_back(BivariateRawAtom{number_field(a, "x", "atom"),
                                         number_field(a, "y", "atom"),
                                         number_field(a, "p", "atom")});
    }
    return BivariateDiscreteDistribution::canonicalize(atoms);
}

std::vector<DiscreteDistribution> parse_forecasts_json(const std::string& text) {
    const json root = parse_json(text, "forecast file");
    std::vector<DiscreteDistribution> forecasts;
    const json* list = nullptr;
    if (root.is_array()) {
        list = &root;
    } else if (root.is_object() && root.contains("forecasts")) {
        if (!root["forecasts"].is_array()) {
            raise(ErrorCode::SchemaError, "\"forecasts\" must be an array");
        }
        list = &root["forecasts"];
    } else if (root.is_object() && root.contains("atoms")) {
        forecasts.push_back(distribution_from_json(root));
        return forecasts;
    } else {
        raise(ErrorCode::SchemaError,
              "forecast file must be a distribution, a \"forecasts\" array, "
              "or a bare array of distributions");
    }
    forecasts.reserve(list->size());
    for (const json& node : *list) {
        forecasts.push_back(distribution_from_json(node));
    }
    if (forecasts.empty()) {
        raise(ErrorCode::SchemaError, "forecast file contains no forecasts");
    }
    return forecasts;
}

FinitePredictionSpace parse_space_json(const std::string& text) {
    const json root = parse_json(text, "prediction space");
    if (!root.is_object() || !root.contains("outcomes") ||
        !root["outcomes"].is_array()) {
        raise(ErrorCode::SchemaError,
              "prediction space must be an object with an \"outcomes\" array");
    }
    std::vector<Outcome> outcomes;
    outcomes.reserve(root["outcomes"].size());
    for (const json& o : root["outcomes"]) {
        if (!o.is_object()) {
            raise(ErrorCode::SchemaError, "each outcome must be an object");
        }
        outcomes.push_back(Outcome{string_field(o, "label", "outcome"),
                                   number_field(o, "p", "outcome"),
                                   number_field(o, "y", "outcome")});
    }
    std::map<std::string, std::map<std::string, std::string>> partitions;
    if (root.contains("partitions")) {
        if (!root["partitions"].is_object()) {
            raise(ErrorCode::SchemaError, "\"partitions\" must be an object");
        }
        for (const auto& [name, assignment] : root["partitions"].items()) {
            if (!assignment.is_object()) {
                raise(ErrorCode::SchemaError,
                      "partition \"" + name + "\" must map labels to cells");
            }
            std::map<std::string, std::string> cells;
            for (const auto& [label, cell] : assignment.items()) {
                if (!cell.is_string()) {
                    raise(ErrorCode::SchemaError, "partition \"" + name +
                                                      "\" cell for \"" + label +
                                                      "\" must be a string");
                }
                cells.emplace(label, cell.get<std::string>());
            }
            partitions.emplace(name, std::move(cells));
        }
    }
    return FinitePredictionSpace::create(std::move(outcomes), std::move(partitions));
}

std::vector<double> parse_samples_csv(const std::string& text) {
    std::vector<double> values;
    for (const auto& row : parse_numeric_csv(text, 1)) {
        values.push_back(row[0]);
    }
    return values;
}

std::vector<std::pair<double, double>> parse_bivariate_samples_csv(
    const std::string& text) {
    std::vector<std::pair<double, double>> pairs;
    for (const auto& row : parse_numeric_csv(text, 2)) {
        pairs.emplace_back(row[0], row[1]);
    }
    return pairs;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        raise(ErrorCode::ParseError, "cannot read file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace elicit::io
