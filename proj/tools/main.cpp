// Command-line harness: single runs, the full benchmark suite, and
// performance-profile extraction.
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "irnopt/cli.hpp"

namespace {

std::vector<std::string> split_csv_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_run(const std::string& problem, const std::string& solver, const std::string& config_path,
            std::int64_t seed) {
  irnopt::SolverConfig cfg;
  if (!config_path.empty()) cfg = irnopt::load_config(config_path);
  const auto t0 = std::chrono::steady_clock::now();
  const irnopt::RunReport report = irnopt::run_one(problem, solver, cfg);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << irnopt::run_record_json(problem, solver, seed, cfg, report, wall) << "\n";
  return report.status == irnopt::Status::Converged ? 0 : 2;
}

int cmd_suite(const std::string& out_path, const std::string& problems_list,
              const std::string& config_path, std::int64_t seed) {
  (void)seed;  // echoed for interface symmetry; the suite is deterministic
  irnopt::SolverConfig cfg;
  if (!config_path.empty()) cfg = irnopt::load_config(config_path);
  const irnopt::SuiteResult result = irnopt::run_suite(split_csv_list(problems_list), cfg);
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return 1;
  }
  irnopt::write_suite_csv(result, out);
  return out.good() ? 0 : 1;
}

int cmd_profile(const std::string& in_path, const std::string& metric,
                const std::string& out_path) {
  std::ifstream in(in_path);
  if (!in) {
    std::cerr << "error: cannot read " << in_path << "\n";
    return 1;
  }
  const irnopt::SuiteResult result = irnopt::read_suite_csv(in);
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return 1;
  }
  irnopt::emit_profile(result, metric, out);
  return out.good() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix-free regularized Newton solvers and benchmark harness"};
  app.require_subcommand(1);

  std::string problem, solver, config_path, out_path, problems_list, in_path, metric;
  std::int64_t seed = 0;

  CLI::App* run = app.add_subcommand("run", "run one solver on one problem");
  run->add_option("--problem", problem, "problem name")->required();
  run->add_option("--solver", solver, "irnewton or iarc")->required();
  run->add_option("--config", config_path, "JSON config overriding defaults");
  run->add_option("--seed", seed, "seed echoed into the output record");

  CLI::App* suite = app.add_subcommand("suite", "run both solvers on the problem suite");
  suite->add_option("--out", out_path, "output CSV path")->required();
  suite->add_option("--problems", problems_list, "comma-separated subset of problem names");
  suite->add_option("--config", config_path, "JSON config overriding defaults");
  suite->add_option("--seed", seed, "seed echoed for reproducibility bookkeeping");

  CLI::App* profile = app.add_subcommand("profile", "emit performance-profile data from a suite CSV");
  profile->add_option("--in", in_path, "suite CSV path")->required();
  profile->add_option("--metric", metric, "iterations or hvp_count")
      ->required()
      ->check(CLI::IsMember({"iterations", "hvp_count"}));
  profile->add_option("--out", out_path, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) return cmd_run(problem, solver, config_path, seed);
    if (suite->parsed()) return cmd_suite(out_path, problems_list, config_path, seed);
    if (profile->parsed()) return cmd_profile(in_path, metric, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
