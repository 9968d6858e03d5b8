#include "elicit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "elicit/elicitation.hpp"
#include "elicit/errors.hpp"
#include "elicit/functionals.hpp"
#include "elicit/io.hpp"
#include "elicit/loss.hpp"
#include "elicit/prediction_space.hpp"
#include "elicit/scoring.hpp"
#include "elicit/selftest.hpp"

#include <json.hpp>

namespace elicit::cli {

namespace {

using io::Doc;

struct Loaded {
    std::optional<DiscreteDistribution> dist;
    std::optional<BivariateDiscreteDistribution> bivariate;
    std::optional<FinitePredictionSpace> space;
    std::vector<std::vector<DiscreteDistribution>> forecast_sets;
    std::vector<double> observations;
    std::optional<LossFunction> loss;
};

void require(bool ok, ErrorCode code, const std::string& message) {
    if (!ok) raise(code, message);
}

void require_param(bool present, const std::string& name,
                   const std::string& context) {
    require(present, ErrorCode::SchemaError,
            context + " requires --" + name);
}

LossFunction parse_loss_spec(const std::string& text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        raise(ErrorCode::ParseError, std::string("loss spec: ") + e.what());
    }
    require(root.is_object(), ErrorCode::SchemaError,
            "loss spec must be a JSON object");
    LossSpec spec;
    for (const auto& [key, value] : root.items()) {
        if (key == "kind") {
            require(value.is_string(), ErrorCode::SchemaError,
                    "loss spec \"kind\" must be a string");
            spec.kind = value.get<std::string>();
        } else if (key == "alpha" || key == "tau" || key == "p") {
            require(value.is_number(), ErrorCode::SchemaError,
                    "loss spec \"" + key + "\" must be a number");
            const double v = value.get<double>();
            if (key == "alpha") spec.alpha = v;
            if (key == "tau") spec.tau = v;
            if (key == "p") spec.p = v;
        } else {
            raise(ErrorCode::SchemaError, "unknown loss spec field \"" + key + "\"");
        }
    }
    require(!spec.kind.empty(), ErrorCode::SchemaError,
            "loss spec needs a \"kind\" field");
    return make_loss(spec);
}

const std::set<std::string>& functional_ops() {
    static const std::set<std::string> ops{
        "quantiles",  "quantile_lower", "es",      "es_lower",
        "rvar",       "expectile",      "moments", "minimizer_interval"};
    return ops;
}

// Phase one: parse the request and every referenced file. Anything that
// throws here is a validation failure (exit status 1).
Loaded load(const Request& req) {
    Loaded loaded;
    require(req.command == "functional" || req.command == "score" ||
                req.command == "covar" || req.command == "predict" ||
                req.command == "selftest",
            ErrorCode::SchemaError, "unknown command \"" + req.command + "\"");
    require(req.output == "json" || req.output == "csv" || req.output == "table",
            ErrorCode::SchemaError, "unknown output format \"" + req.output + "\"");

    if (req.command == "functional") {
        require_param(req.dist.has_value(), "dist", "functional");
        require_param(req.op.has_value(), "op", "functional");
        const std::string& op = *req.op;
        require(functional_ops().count(op) != 0, ErrorCode::SchemaError,
                "unknown functional op \"" + op + "\"");
        if (op == "quantiles" || op == "quantile_lower" || op == "es" ||
            op == "es_lower") {
            require_param(req.alpha.has_value(), "alpha", "op " + op);
        }
        if (op == "rvar") {
            require_param(req.alpha.has_value(), "alpha", "op rvar");
            require_param(req.beta.has_value(), "beta", "op rvar");
        }
        if (op == "expectile") {
            require_param(req.tau.has_value(), "tau", "op expectile");
        }
        if (op == "minimizer_interval") {
            require_param(req.loss.has_value(), "loss", "op minimizer_interval");
        }
        loaded.dist = io::parse_distribution_json(io::read_file(*req.dist));
    } else if (req.command == "score") {
        require_param(req.rule.has_value(), "rule", "score");
        const std::string& rule_name = *req.rule;
        require(rule_name == "crps" || rule_name == "crps_threshold" ||
                    rule_name == "twcrps" || rule_name == "log_score",
                ErrorCode::SchemaError, "unknown rule \"" + rule_name + "\"");
        if (rule_name == "twcrps") {
            require_param(req.alpha.has_value(), "alpha",
                          "rule twcrps (lower threshold)");
            require_param(req.beta.has_value(), "beta",
                          "rule twcrps (upper threshold)");
        }
        require(!req.forecasts.empty() && req.forecasts.size() <= 2,
                ErrorCode::SchemaError,
                "score takes one forecast file, or two to compare");
        require_param(req.obs.has_value(), "obs", "score");
        if (req.hac_lag.has_value()) {
            require(*req.hac_lag >= 0, ErrorCode::SchemaError,
                    "--hac-lag must be nonnegative");
        }
        for (const std::string& path : req.forecasts) {
            loaded.forecast_sets.push_back(
                io::parse_forecasts_json(io::read_file(path)));
        }
        loaded.observations = io::parse_samples_csv(io::read_file(*req.obs));
    } else if (req.command == "covar") {
        require_param(req.bivariate.has_value(), "bivariate", "covar");
        require_param(req.op.has_value(), "op", "covar");
        require(*req.op == "covar_conditional" || *req.op == "covar_coes",
                ErrorCode::SchemaError, "unknown covar op \"" + *req.op + "\"");
        require_param(req.beta.has_value(), "beta", "covar");
        if (*req.op == "covar_coes") {
            require_param(req.alpha.has_value(), "alpha", "op covar_coes");
        }
        loaded.bivariate = io::parse_bivariate_json(io::read_file(*req.bivariate));
    } else if (req.command == "predict") {
        require_param(req.space.has_value(), "space", "predict");
        if (req.functional.has_value()) {
            const std::string& f = *req.functional;
            require(f == "mean" || f == "quantile_lower" || f == "expectile" ||
                        f == "es_upper",
                    ErrorCode::SchemaError, "unknown functional \"" + f + "\"");
            if (f == "quantile_lower" || f == "es_upper") {
                require_param(req.alpha.has_value(), "alpha", "functional " + f);
            }
            if (f == "expectile") {
                require_param(req.tau.has_value(), "tau", "functional expectile");
            }
        }
        loaded.space = io::parse_space_json(io::read_file(*req.space));
    }
    if (req.loss.has_value()) {
        loaded.loss = parse_loss_spec(*req.loss);
    }
    return loaded;
}

Doc value_doc(double v) {
    Doc doc = Doc::object();
    doc.add("value", Doc::number(v));
    return doc;
}

Doc run_functional(const Request& req, const Loaded& loaded) {
    const DiscreteDistribution& dist = *loaded.dist;
    const std::string& op = *req.op;
    if (op == "quantiles") {
        const QuantileInterval q = quantiles(dist, *req.alpha);
        Doc doc = Doc::object();
        doc.add("lower", Doc::number(q.lower.raw()));
        doc.add("upper", Doc::number(q.upper.raw()));
        return doc;
    }
    if (op == "quantile_lower") {
        return value_doc(quantile_lower(dist, *req.alpha));
    }
    if (op == "es") {
        return value_doc(
            weighted_quantile_average(dist, WeightFunction::es_upper(*req.alpha))
                .raw());
    }
    if (op == "es_lower") {
        return value_doc(
            weighted_quantile_average(dist, WeightFunction::es_lower(*req.alpha))
                .raw());
    }
    if (op == "rvar") {
        return value_doc(
            weighted_quantile_average(dist,
                                      WeightFunction::rvar(*req.alpha, *req.beta))
                .raw());
    }
    if (op == "expectile") {
        return value_doc(expectile(dist, *req.tau));
    }
    if (op == "moments") {
        const MomentStats stats = moment_stats(dist);
        Doc doc = Doc::object();
        doc.add("mean", Doc::number(stats.mean));
        doc.add("variance", Doc::number(stats.variance));
        if (stats.skewness) doc.add("skewness", Doc::number(*stats.skewness));
        if (stats.kurtosis) doc.add("kurtosis", Doc::number(*stats.kurtosis));
        if (stats.sharpe_ratio) {
            doc.add("sharpe_ratio", Doc::number(*stats.sharpe_ratio));
        }
        return doc;
    }
    // minimizer_interval
    const MinimizerInterval mi = minimizer_interval(*loaded.loss, dist);
    Doc doc = Doc::object();
    doc.add("t_min", Doc::number(mi.t_min));
    doc.add("t_max", Doc::number(mi.t_max));
    doc.add("bayes_risk", Doc::number(mi.bayes_risk));
    return doc;
}

ScoringRule build_rule(const Request& req) {
    const std::string& name = *req.rule;
    if (name == "crps") return rule::crps();
    if (name == "crps_threshold") return rule::crps(CrpsMethod::threshold);
    if (name == "twcrps") {
        return rule::twcrps(ThresholdWeight::indicator(*req.alpha, *req.beta));
    }
    return rule::log_score();
}

Doc score_entries_doc(const ScoreSeries& series) {
    Doc entries = Doc::array();
    for (std::size_t i = 0; i < series.size(); ++i) {
        Doc row = Doc::object();
        row.add("index", Doc::number(static_cast<double>(i)));
        row.add("score", Doc::number(series.entries()[i].score.raw()));
        row.add("observation", Doc::number(series.entries()[i].observation));
        entries.push(std::move(row));
    }
    return entries;
}

Doc run_score(const Request& req, const Loaded& loaded, bool flat) {
    const ScoringRule rule = build_rule(req);
    if (loaded.forecast_sets.size() == 2) {
        const ScoreSeries series_a =
            score_series(rule, loaded.forecast_sets[0], loaded.observations);
        const ScoreSeries series_b =
            score_series(rule, loaded.forecast_sets[1], loaded.observations);
        const std::size_t lag =
            req.hac_lag ? static_cast<std::size_t>(*req.hac_lag) : 0;
        const DmResult dm = diebold_mariano(series_a, series_b, lag);
        Doc doc = Doc::object();
        doc.add("rule", Doc::string(rule.name));
        doc.add("n", Doc::number(static_cast<double>(series_a.size())));
        doc.add("mean_a", Doc::number(series_a.mean().raw()));
        doc.add("mean_b", Doc::number(series_b.mean().raw()));
        doc.add("hac_lag", Doc::number(static_cast<double>(lag)));
        doc.add("statistic", Doc::number(dm.statistic));
        doc.add("p_value", Doc::number(dm.p_value));
        return doc;
    }
    const ScoreSeries series =
        score_series(rule, loaded.forecast_sets[0], loaded.observations);
    if (flat) {
        return score_entries_doc(series);
    }
    Doc doc = Doc::object();
    doc.add("rule", Doc::string(rule.name));
    doc.add("n", Doc::number(static_cast<double>(series.size())));
    doc.add("infinite_count",
            Doc::number(static_cast<double>(series.infinite_count())));
    doc.add("mean", Doc::number(series.mean().raw()));
    doc.add("entries", score_entries_doc(series));
    return doc;
}

Doc run_covar(const Request& req, const Loaded& loaded) {
    if (*req.op == "covar_conditional") {
        return io::distribution_doc(covar_conditional(*loaded.bivariate, *req.beta));
    }
    const CoRiskMeasures m = covar_coes(*loaded.bivariate, *req.alpha, *req.beta);
    Doc doc = Doc::object();
    doc.add("covar", Doc::number(m.covar));
    doc.add("coes", Doc::number(m.coes));
    return doc;
}

Functional build_functional(const Request& req) {
    if (!req.functional || *req.functional == "mean") return Functional::mean();
    if (*req.functional == "quantile_lower") {
        return Functional::quantile_lower(*req.alpha);
    }
    if (*req.functional == "expectile") return Functional::expectile(*req.tau);
    return Functional::es_upper(*req.alpha);
}

Doc run_predict(const Request& req, const Loaded& loaded, bool flat) {
    const FinitePredictionSpace& space = *loaded.space;
    const Functional functional = build_functional(req);
    const LossFunction loss = loaded.loss ? *loaded.loss : loss::squared();

    std::vector<std::string> partitions;
    if (req.partition) {
        partitions.push_back(*req.partition);
    } else {
        partitions = space.partition_names();
    }

    Doc rows = Doc::array();
    Doc parts = Doc::array();
    for (const std::string& name : partitions) {
        const MarkovKernelFinite kernel = conditional_kernel(space, name);
        const PointForecast ideal =
            apply_functional_to_kernel(space, kernel, functional);
        const bool measurable = is_measurable(ideal, space, name);
        const double score = expected_point_score(space, ideal, loss);
        const BestForecast best = best_measurable_forecast(space, name, loss);
        const ScoreValue prob_score =
            expected_probabilistic_score(space, kernel, rule::crps());
        if (flat) {
            for (std::size_t i = 0; i < space.size(); ++i) {
                Doc row = Doc::object();
                row.add("partition", Doc::string(name));
                row.add("label", Doc::string(space.outcomes()[i].label));
                row.add("y", Doc::number(space.outcomes()[i].response));
                row.add("ideal", Doc::number(ideal.by_outcome[i]));
                row.add("measurable", Doc::boolean(measurable));
                row.add("expected_score", Doc::number(score));
                row.add("best_value", Doc::number(best.value));
                row.add("crps", Doc::number(prob_score.raw()));
                rows.push(std::move(row));
            }
        } else {
            Doc part = Doc::object();
            part.add("partition", Doc::string(name));
            Doc values = Doc::array();
            for (double v : ideal.by_outcome) values.push(Doc::number(v));
            part.add("ideal", std::move(values));
            part.add("measurable", Doc::boolean(measurable));
            part.add("expected_score", Doc::number(score));
            part.add("best_value", Doc::number(best.value));
            part.add("crps", Doc::number(prob_score.raw()));
            parts.push(std::move(part));
        }
    }
    if (flat) return rows;
    Doc doc = Doc::object();
    doc.add("functional", Doc::string(functional.name));
    doc.add("loss", Doc::string(loss.name()));
    doc.add("partitions", std::move(parts));
    return doc;
}

Doc selftest_doc(const std::vector<selftest::SuiteResult>& results, bool flat) {
    Doc suites = Doc::array();
    bool all_passed = true;
    for (const selftest::SuiteResult& r : results) {
        all_passed = all_passed && r.passed();
        Doc row = Doc::object();
        row.add("id", Doc::number(static_cast<double>(r.id)));
        row.add("name", Doc::string(r.name));
        row.add("trials", Doc::number(static_cast<double>(r.trials)));
        row.add("failures", Doc::number(static_cast<double>(r.failures)));
        row.add("passed", Doc::boolean(r.passed()));
        suites.push(std::move(row));
    }
    if (flat) return suites;
    Doc doc = Doc::object();
    doc.add("suites", std::move(suites));
    doc.add("all_passed", Doc::boolean(all_passed));
    return doc;
}

void emit(const Doc& doc, const std::string& format, std::ostream& out) {
    if (format == "json") {
        out << io::to_json(doc);
    } else if (format == "csv") {
        out << io::to_csv(doc);
    } else {
        out << io::to_table(doc);
    }
}

}  // namespace

int dispatch(const Request& req, std::ostream& out, std::ostream& err) {
    Loaded loaded;
    try {
        loaded = load(req);
    } catch (const Error& e) {
        err << "ERROR " << to_string(e.code()) << ": " << e.what() << '\n';
        return 1;
    }
    try {
        const bool flat = req.output != "json";
        if (req.command == "selftest") {
            const std::vector<selftest::SuiteResult> results =
                selftest::run_all(&err);
            emit(selftest_doc(results, flat), req.output, out);
            const bool all_passed =
                std::all_of(results.begin(), results.end(),
                            [](const selftest::SuiteResult& r) { return r.passed(); });
            return all_passed ? 0 : 2;
        }
        Doc doc;
        if (req.command == "functional") {
            doc = run_functional(req, loaded);
        } else if (req.command == "score") {
            doc = run_score(req, loaded, flat);
        } else if (req.command == "covar") {
            doc = run_covar(req, loaded);
        } else {
            doc = run_predict(req, loaded, flat);
        }
        emit(doc, req.output, out);
        return 0;
    } catch (const Error& e) {
        err << "ERROR " << to_string(e.code()) << ": " << e.what() << '\n';
        return 2;
    }
}

}  // namespace elicit::cli
