#pragma once

#include "fwsliding/baselines.hpp"
#include "fwsliding/bounds.hpp"
#include "fwsliding/core.hpp"
#include "fwsliding/instances.hpp"

#include <json.hpp>

#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace fwsliding {

enum class Algorithm { CG, CGS, CGSLS };

const char *to_string(Algorithm a);

/// A schema violation in a config document. what() reads
/// "line N: <json path>: <message>".
class ConfigError : public InvalidArgument {
public:
    ConfigError(std::string path, int line, const std::string &message);
    const std::string &path() const noexcept { return path_; }
    int line() const noexcept { return line_; }

private:
    std::string path_;
    int line_;
};

struct RunOutputs {
    std::optional<std::string> trace_csv;
    std::optional<std::string> summary_json;
};

/// One solver run on one generated instance. Unset solver fields take
/// defaults at execution time (d_estimate: the set's diameter bound;
/// CGS lipschitz: the power-iteration estimate; CGS fixed_n: default_fixed_n).
struct RunConfig {
    InstanceSpec instance;
    Algorithm algorithm = Algorithm::CGSLS;
    SolverConfig solver;
    BaselineConfig baseline;
    bool d_estimate_given = false;
    RunOutputs outputs;
};

/// Parses and validates a RunConfig document. `raw` is the original text,
/// used to report line numbers; `base` prefixes paths when the document is
/// nested inside a larger one.
RunConfig parse_run_config(const nlohmann::json &doc, const std::string &raw,
                           const std::vector<std::variant<std::string, std::size_t>> &base = {});

/// 1-based line of the value at `path` in `raw`, or 0 when not found.
int locate_json_path(const std::string &raw,
                     const std::vector<std::variant<std::string, std::size_t>> &path);

struct RunOutcome {
    RunConfig config;
    SolveResult result;
    double l_min = kNaN;
    double d_x = kNaN;
    double f_star = kNaN;
    std::optional<TraceBoundReport> bounds;
    nlohmann::json summary;
};

/// Generates the instance, picks the starting vertex from the seed, runs the
/// algorithm and assembles the summary report.
RunOutcome execute_run(const RunConfig &config);

inline constexpr const char *kTraceHeader =
    "k,l_k,gamma,big_gamma,beta,eta,inner_iters,f_y,lower_bound,cert_gap,wolfe_gap,cum_lmo,"
    "cum_backtracks,elapsed_seconds";

/// Trace CSV with the fixed header; reals with 17 significant digits, empty
/// cells for quantities an algorithm does not produce.
void write_trace_csv(std::ostream &out, const std::vector<TraceRecord> &trace);

/// Exit codes: 0 certified, 2 stopped by a cap, 1 on error.
int cli_run(const std::string &config_path, std::ostream &out, std::ostream &err);

/// Runs every config of a suite, optionally in parallel, and writes the
/// aggregate CSV and comparison report. 0 when every run succeeded and every
/// check passed, 2 otherwise, 1 when the suite itself is unusable.
int cli_bench(const std::string &suite_path, int parallelism, std::ostream &out, std::ostream &err);

/// CG on 1/2 ||x||^2 over the segment {x >= 0, x1 + x2 = 1} from (0, 1).
int cli_demo_segment(std::ostream &out, std::ostream &err);

/// Oracle-equivalence gate against brute force.
int cli_lmo_check(const std::string &family, long size, long trials, std::uint64_t seed,
                  std::ostream &out, std::ostream &err);

/// Reads FW_SLIDING_LOG (error | info | debug) and sets the stderr log level.
void configure_logging();

}  // namespace fwsliding
