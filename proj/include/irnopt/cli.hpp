#ifndef IRNOPT_CLI_HPP
#define IRNOPT_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "irnopt/core.hpp"

namespace irnopt {

struct SuiteRow {
  std::string problem;
  std::string solver;
  Status status = Status::SubproblemFailure;
  std::int64_t iterations = 0;
  std::int64_t accepted = 0;
  std::int64_t newton_steps = 0;
  std::int64_t hvp_count = 0;
  std::int64_t tridiag_factorizations = 0;
  double final_f = 0.0;
  double final_grad_inf_norm = 0.0;
  double wall_secs = 0.0;
};

struct SuiteResult {
  std::vector<SuiteRow> rows;  // one row per (problem, solver) pair attempted
};

/// Parses a JSON object whose keys mirror SolverConfig field names
/// exactly; unknown keys are an error.  Throws std::invalid_argument
/// on schema violations, std::runtime_error on unreadable input.
SolverConfig parse_config_json(const std::string& text);

/// Reads and parses a JSON config file.
SolverConfig load_config(const std::string& path);

/// Runs one solver ("irnewton" or "iarc") on one registered problem.
RunReport run_one(const std::string& problem, const std::string& solver,
                  const SolverConfig& cfg);

/// The single-run JSON record: every scalar report field plus a config
/// echo.
std::string run_record_json(const std::string& problem, const std::string& solver,
                            std::int64_t seed, const SolverConfig& cfg, const RunReport& report,
                            double wall_secs);

/// Runs both solvers on every named problem (all registered problems
/// when the list is empty); rows are sorted by (problem, solver).
SuiteResult run_suite(const std::vector<std::string>& problems, const SolverConfig& cfg);

void write_suite_csv(const SuiteResult& result, std::ostream& out);

/// Parses a CSV produced by write_suite_csv; throws std::runtime_error
/// on malformed input.
SuiteResult read_suite_csv(std::istream& in);

/// Dolan-More profile data for metric "iterations" or "hvp_count" on
/// the grid alpha in {0, 0.1, ..., 10}.  Problems are included only
/// when every solver converged on them.  Output columns:
/// solver,alpha,fraction.
void emit_profile(const SuiteResult& result, const std::string& metric, std::ostream& out);

}  // namespace irnopt

#endif  // IRNOPT_CLI_HPP
