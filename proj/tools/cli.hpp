#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccfd/benchmark.hpp"
#include "json.hpp"

namespace ccfd::cli {

enum class Subcommand { solve, study, gamma_sweep, dump_stencils, dump_grid };
enum class MethodChoice { fdm, ccfdm, both };
enum class OutputFormat { csv, json };

enum ExitCode : int { exit_ok = 0, exit_not_converged = 1, exit_usage = 2, exit_io = 3 };

/// Every setting of one invocation. Field names double as config file keys.
struct RunConfig {
    Subcommand subcommand = Subcommand::solve;
    int problem = 1;
    MethodChoice method = MethodChoice::both;
    std::vector<AxisFamily> families{AxisFamily::uniform};
    double gamma = 1.0;
    std::size_t size = 20;
    std::vector<std::size_t> levels{10, 20, 40};
    std::vector<double> gammas = default_gamma_values();
    std::size_t axis = 0;

    double residual_tolerance = 1e-14;
    std::size_t max_sweeps = 1'000'000;
    ResidualReading residual = ResidualReading::absolute;
    CorrectionMode correction = CorrectionMode::single_pass;
    std::size_t max_correction_passes = 50;
    double correction_tolerance = 1e-12;
    BoundaryClosure closure = BoundaryClosure::three_point;
    ErrorNodes error_nodes = ErrorNodes::interior;

    std::string output_dir = ".";
    OutputFormat format = OutputFormat::csv;
    bool verbose = false;
    bool dump_derivatives = false;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Bad command line or config file.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string_view to_string(Subcommand subcommand);
Subcommand parse_subcommand(std::string_view name);
std::string_view to_string(MethodChoice method);
MethodChoice parse_method_choice(std::string_view name);

nlohmann::json to_json(const RunConfig& config);
/// Overlays the keys present in `j` on `base`. Unknown keys are rejected.
RunConfig merge_json(RunConfig base, const nlohmann::json& j);

void validate(const RunConfig& config);
SolverConfig solver_config(const RunConfig& config);

struct ParseResult {
    RunConfig config;
    /// Set for --help; holds the text to print.
    std::optional<std::string> help;
};

/**
 * Precedence: flags, then the --config file, then CCFD_OUTPUT_DIR for the
 * output directory, then defaults. Throws UsageError.
 */
ParseResult parse_args(const std::vector<std::string>& args);

/// Runs a parsed config. Returns an ExitCode.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + run with error reporting; args exclude the program name.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ccfd::cli
