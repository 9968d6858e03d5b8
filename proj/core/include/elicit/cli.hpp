#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace elicit::cli {

/// Parsed command line request. The argv front end (tools/) fills this
/// in; keeping dispatch on this struct makes the whole command surface
/// drivable in-process by tests.
struct Request {
    std::string command;  // functional | score | covar | predict | selftest

    std::optional<std::string> dist;        // univariate distribution file
    std::optional<std::string> bivariate;   // bivariate distribution file
    std::optional<std::string> space;       // prediction space file
    std::vector<std::string> forecasts;     // 1 forecast file, or 2 to compare
    std::optional<std::string> obs;         // observations CSV

    std::optional<std::string> op;          // functional/covar operation name
    std::optional<std::string> rule;        // scoring rule name
    std::optional<std::string> loss;        // inline JSON loss spec
    std::optional<std::string> partition;   // partition name
    std::optional<std::string> functional;  // point functional name

    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<double> tau;
    std::optional<int> hac_lag;

    std::string output = "json";  // json | csv | table
};

/// Executes the request, writing the payload to out and one-line
/// diagnostics ("ERROR <code>: <message>") to err. Returns the process
/// exit status: 0 success, 1 validation error, 2 computation error.
int dispatch(const Request& request, std::ostream& out, std::ostream& err);

}  // namespace elicit::cli
