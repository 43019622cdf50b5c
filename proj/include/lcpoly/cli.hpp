#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcpoly/measure.hpp"
#include "lcpoly/polynomial.hpp"

namespace lcpoly::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitCheckFailed = 2,
    kExitUsage = 64,
    kExitIo = 74,
};

/// Invalid configuration: unknown field, wrong type, bad value.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Flat experiment configuration. JSON keys are the field names; the
/// equivalent flags use '-' for '_'.
struct ExperimentConfig {
    std::string suite;
    std::string measure = "standard_gaussian";
    std::size_t dim = 1;
    double lo = 0.0;
    double hi = 1.0;
    double rate = 1.0;
    double radius = 1.0;
    std::string potential;
    double support_radius = 0.0;
    bool convex = false;
    std::optional<std::string> f;
    std::optional<std::string> g;
    std::optional<std::string> h;
    std::string e = "e1";
    double q = 2.0;
    std::vector<double> t_grid;
    std::vector<double> deltas;
    std::size_t n = 100000;
    std::uint64_t seed = 42;
    std::size_t bins = 0;
    std::size_t cells = 200;
    unsigned degree = 2;
    double coef_scale = 1.0;
    std::vector<std::string> families{"standard_gaussian", "uniform_box", "product_exponential"};
    std::vector<std::size_t> dims{1, 2, 3, 4};
    bool ensemble = false;
    std::string method = "auto";
    unsigned burn_in = 1000;
    unsigned thinning = 0;
    std::size_t threads = 0;
    std::string out;
    std::string csv;
    std::string svg;
};

[[nodiscard]] const std::vector<std::string>& suite_names();

/// Parses a flat JSON object, rejecting unknown fields. Grids accept an
/// array of numbers, "a,b,c", or "lo:hi:Nlog" / "lo:hi:Nlin".
[[nodiscard]] ExperimentConfig config_from_json(const nlohmann::json& j);
/// Effective configuration echoed into artifacts. Output paths and the
/// thread count are omitted since they cannot change results.
[[nodiscard]] nlohmann::json config_echo(const ExperimentConfig& c);

[[nodiscard]] std::vector<double> parse_grid(const std::string& text);
/// "eK" for the K-th axis, or comma-separated components.
[[nodiscard]] Direction parse_direction(const std::string& text, std::size_t dim);
[[nodiscard]] LogConcaveMeasure build_measure(const ExperimentConfig& c);

struct RunResult {
    int exit_code = kExitOk;
    nlohmann::json report;
    std::string csv;
    std::optional<std::string> svg;
};

/// Runs a validated configuration without touching the file system.
[[nodiscard]] RunResult execute(const ExperimentConfig& c);

/// Executes and writes the artifacts: the report goes to c.out (stdout when
/// empty), CSV and SVG to their paths when set.
int run(const ExperimentConfig& c, std::ostream& out, std::ostream& err);

/// Full command line: `check <suite>`, `sweep`, `estimate-constant`,
/// `sample`, `run <config.json>`.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lcpoly::cli
