#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "elicit/cli.hpp"

int main(int argc, char** argv) {
    elicit::cli::Request request;

    CLI::App app{
        "Evaluation toolkit for point and probabilistic forecasts: "
        "quantile-family functionals, consistent losses and their Bayes "
        "acts, proper scoring rules, co-risk conditioning and finite "
        "prediction spaces."};
    app.require_subcommand(1);

    // Shared options, attached per subcommand so --help stays focused.
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--output", request.output,
                        "Output format: json, csv or table")
            ->capture_default_str();
    };

    CLI::App* functional = app.add_subcommand(
        "functional", "Evaluate a functional of a distribution file");
    functional->add_option("--dist", request.dist,
                           "Distribution JSON ({\"atoms\": [{\"x\", \"p\"}...]})");
    functional->add_option(
        "--op", request.op,
        "quantiles | quantile_lower | es | es_lower | rvar | expectile | "
        "moments | minimizer_interval");
    functional->add_option("--alpha", request.alpha, "Level in (0, 1)");
    functional->add_option("--beta", request.beta, "Second level in (0, 1)");
    functional->add_option("--tau", request.tau, "Expectile level in (0, 1)");
    functional->add_option("--loss", request.loss,
                           "Inline loss spec, e.g. {\"kind\": \"pinball\", "
                           "\"alpha\": 0.5}");
    add_common(functional);

    CLI::App* score = app.add_subcommand(
        "score", "Score forecasts against observations; two forecast files "
                 "are compared with a Diebold-Mariano test");
    score->add_option("--rule", request.rule,
                      "crps | crps_threshold | twcrps | log_score");
    score->add_option("--forecasts", request.forecasts,
                      "One forecast JSON file, or two to compare")
        ->expected(1, 2);
    score->add_option("--obs", request.obs, "Observations CSV, one per line");
    score->add_option("--alpha", request.alpha,
                      "twcrps: lower threshold of the weight band");
    score->add_option("--beta", request.beta,
                      "twcrps: upper threshold of the weight band");
    score->add_option("--hac-lag", request.hac_lag,
                      "Bartlett HAC lag for the comparison test");
    add_common(score);

    CLI::App* covar = app.add_subcommand(
        "covar", "Conditional-tail law and co-risk measures of a bivariate "
                 "distribution file");
    covar->add_option("--bivariate", request.bivariate,
                      "Bivariate JSON ({\"atoms\": [{\"x\", \"y\", \"p\"}...]})");
    covar->add_option("--op", request.op, "covar_conditional | covar_coes");
    covar->add_option("--alpha", request.alpha, "Quantile level on the conditional law");
    covar->add_option("--beta", request.beta, "Conditioning tail level");
    add_common(covar);

    CLI::App* predict = app.add_subcommand(
        "predict", "Ideal forecasts, measurability and expected scores on a "
                   "finite prediction space");
    predict->add_option("--space", request.space, "Prediction-space JSON file");
    predict->add_option("--partition", request.partition,
                        "Restrict the report to one partition");
    predict->add_option("--functional", request.functional,
                        "mean | quantile_lower | expectile | es_upper");
    predict->add_option("--alpha", request.alpha, "Level for quantile_lower/es_upper");
    predict->add_option("--tau", request.tau, "Level for expectile");
    predict->add_option("--loss", request.loss,
                        "Loss spec for the expected-score comparison");
    add_common(predict);

    CLI::App* selftest = app.add_subcommand(
        "selftest", "Run the built-in verification suites");
    add_common(selftest);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    for (CLI::App* cmd : {functional, score, covar, predict, selftest}) {
        if (cmd->parsed()) {
            request.command = cmd->get_name();
        }
    }

    return elicit::cli::dispatch(request, std::cout, std::cerr);
}
