#include "irnopt/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "irnopt/driver.hpp"
#include "irnopt/problems.hpp"

namespace irnopt {

namespace {

using nlohmann::json;

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

Status status_from_string(const std::string& s) {
  for (Status st : {Status::Converged, Status::MaxIters, Status::TimeLimit,
                    Status::StepNormFloor, Status::SubproblemFailure}) {
    if (s == to_string(st)) return st;
  }
  throw std::runtime_error("unknown status value: " + s);
}

json config_to_json(const SolverConfig& cfg) {
  json j{{"eta", cfg.eta},
         {"eta1", cfg.eta1},
         {"eta2", cfg.eta2},
         {"gamma0", cfg.gamma0},
         {"gammaL", cfg.gammaL},
         {"gammaU", cfg.gammaU},
         {"sigma_min", cfg.sigma_min},
         {"sigma_max", cfg.sigma_max},
         {"kappa1", cfg.kappa1},
         {"kappa2", cfg.kappa2},
         {"kappa3", cfg.kappa3},
         {"grad_tol", cfg.grad_tol},
         {"max_iters", cfg.max_iters},
         {"time_limit_secs", cfg.time_limit_secs},
         {"step_norm_floor", cfg.step_norm_floor},
         {"sigma0", cfg.sigma0},
         {"sigmaU0", cfg.sigmaU0},
         {"check_second_order", cfg.check_second_order},
         {"cg_residual_safety", cfg.cg_residual_safety}};
  if (cfg.kappa4) j["kappa4"] = *cfg.kappa4;
  return j;
}

}  // namespace

SolverConfig parse_config_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");

  SolverConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "eta") cfg.eta = value.get<double>();
    else if (key == "eta1") cfg.eta1 = value.get<double>();
    else if (key == "eta2") cfg.eta2 = value.get<double>();
    else if (key == "gamma0") cfg.gamma0 = value.get<double>();
    else if (key == "gammaL") cfg.gammaL = value.get<double>();
    else if (key == "gammaU") cfg.gammaU = value.get<double>();
    else if (key == "sigma_min") cfg.sigma_min = value.get<double>();
    else if (key == "sigma_max") cfg.sigma_max = value.get<double>();
    else if (key == "kappa1") cfg.kappa1 = value.get<double>();
    else if (key == "kappa2") cfg.kappa2 = value.get<double>();
    else if (key == "kappa3") cfg.kappa3 = value.get<double>();
    else if (key == "kappa4") cfg.kappa4 = value.get<double>();
    else if (key == "grad_tol") cfg.grad_tol = value.get<double>();
    else if (key == "max_iters") cfg.max_iters = value.get<std::int64_t>();
    else if (key == "time_limit_secs") cfg.time_limit_secs = value.get<double>();
    else if (key == "step_norm_floor") cfg.step_norm_floor = value.get<double>();
    else if (key == "sigma0") cfg.sigma0 = value.get<double>();
    else if (key == "sigmaU0") cfg.sigmaU0 = value.get<double>();
    else if (key == "check_second_order") cfg.check_second_order = value.get<bool>();
    else if (key == "cg_residual_safety") cfg.cg_residual_safety = value.get<double>();
    else throw std::invalid_argument("unknown config key: " + key);
  }
  cfg.validate();
  return cfg;
}

SolverConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_json(buf.str());
}

RunReport run_one(const std::string& problem_name, const std::string& solver,
                  const SolverConfig& cfg) {
  const ProblemSpec& spec = find_problem(problem_name);
  const Problem problem = spec.factory();
  if (solver == "irnewton") return irnewton_solve(problem, spec.x0, cfg);
  if (solver == "iarc") return iarc_solve(problem, spec.x0, cfg);
  throw std::invalid_argument("unknown solver: " + solver);
}

std::string run_record_json(const std::string& problem, const std::string& solver,
                            std::int64_t seed, const SolverConfig& cfg, const RunReport& report,
                            double wall_secs) {
  json j{{"problem", problem},
         {"solver", solver},
         {"seed", seed},
         {"status", to_string(report.status)},
         {"iterations", report.iterations},
         {"accepted", report.accepted},
         {"newton_steps", report.newton_steps},
         {"hvp_count", report.hvp_count},
         {"tridiag_factorizations", report.tridiag_factorizations},
         {"final_f", report.final_f},
         {"final_grad_inf_norm", report.final_grad_inf_norm},
         {"wall_secs", wall_secs},
         {"config", config_to_json(cfg)}};
  return j.dump(2);
}

SuiteResult run_suite(const std::vector<std::string>& problems, const SolverConfig& cfg) {
  std::vector<std::string> names = problems;
  if (names.empty()) {
    for (const ProblemSpec& s : registry()) names.push_back(s.name);
  }
  SuiteResult result;
  for (const std::string& name : names) {
    for (const std::string solver : {"irnewton", "iarc"}) {
      const auto t0 = std::chrono::steady_clock::now();
      const RunReport rep = run_one(name, solver, cfg);
      const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      SuiteRow row;
      row.problem = name;
      row.solver = solver;
      row.status = rep.status;
      row.iterations = rep.iterations;
      row.accepted = rep.accepted;
      row.newton_steps = rep.newton_steps;
      row.hvp_count = rep.hvp_count;
      row.tridiag_factorizations = rep.tridiag_factorizations;
      row.final_f = rep.final_f;
      row.final_grad_inf_norm = rep.final_grad_inf_norm;
      row.wall_secs = wall;
      result.rows.push_back(std::move(row));
    }
  }
  std::sort(result.rows.begin(), result.rows.end(), [](const SuiteRow& a, const SuiteRow& b) {
    return std::tie(a.problem, a.solver) < std::tie(b.problem, b.solver);
  });
  return result;
}

void write_suite_csv(const SuiteResult& result, std::ostream& out) {
  out << "problem,solver,status,iterations,accepted,newton_steps,hvp_count,"
         "tridiag_factorizations,final_f,final_grad_inf_norm,wall_secs\n";
  for (const SuiteRow& r : result.rows) {
    out << r.problem << ',' << r.solver << ',' << to_string(r.status) << ',' << r.iterations
        << ',' << r.accepted << ',' << r.newton_steps << ',' << r.hvp_count << ','
        << r.tridiag_factorizations << ',' << fmt17(r.final_f) << ','
        << fmt17(r.final_grad_inf_norm) << ',' << fmt17(r.wall_secs) << '\n';
  }
}

SuiteResult read_suite_csv(std::istream& in) {
  static const std::string expected_header =
      "problem,solver,status,iterations,accepted,newton_steps,hvp_count,"
      "tridiag_factorizations,final_f,final_grad_inf_norm,wall_secs";
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected_header) throw std::runtime_error("unexpected CSV header: " + line);

  SuiteResult result;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 11) {
      throw std::runtime_error("malformed CSV row at line " + std::to_string(lineno));
    }
    try {
      SuiteRow row;
      row.problem = fields[0];
      row.solver = fields[1];
      row.status = status_from_string(fields[2]);
      row.iterations = std::stoll(fields[3]);
      row.accepted = std::stoll(fields[4]);
      row.newton_steps = std::stoll(fields[5]);
      row.hvp_count = std::stoll(fields[6]);
      row.tridiag_factorizations = std::stoll(fields[7]);
      row.final_f = std::stod(fields[8]);
      row.final_grad_inf_norm = std::stod(fields[9]);
      row.wall_secs = std::stod(fields[10]);
      result.rows.push_back(std::move(row));
    } catch (const std::exception&) {
      throw std::runtime_error("malformed CSV row at line " + std::to_string(lineno));
    }
  }
  return result;
}

void emit_profile(const SuiteResult& result, const std::string& metric, std::ostream& out) {
  if (metric != "iterations" && metric != "hvp_count") {
    throw std::invalid_argument("unknown profile metric: " + metric);
  }
  auto metric_of = [&](const SuiteRow& r) {
    return metric == "iterations" ? r.iterations : r.hvp_count;
  };

  // per problem: solver -> (converged, metric)
  std::map<std::string, std::map<std::string, std::pair<bool, std::int64_t>>> by_problem;
  std::set<std::string> solvers;
  for (const SuiteRow& r : result.rows) {
    by_problem[r.problem][r.solver] = {r.status == Status::Converged, metric_of(r)};
    solvers.insert(r.solver);
  }

  // include a problem only when every solver converged on it
  std::map<std::string, std::int64_t> best;
  for (const auto& [problem, per_solver] : by_problem) {
    if (per_solver.size() != solvers.size()) continue;
    bool all_ok = true;
    std::int64_t m = std::numeric_limits<std::int64_t>::max();
    for (const auto& [solver, entry] : per_solver) {
      all_ok = all_ok && entry.first;
      m = std::min(m, entry.second);
    }
    if (all_ok) best[problem] = m;
  }

  out << "solver,alpha,fraction\n";
  for (const std::string& solver : solvers) {
    for (int i = 0; i <= 100; ++i) {
      const double alpha = 0.1 * i;
      const double factor = std::pow(2.0, alpha);
      std::int64_t within = 0;
      for (const auto& [problem, m] : best) {
        const auto& entry = by_problem[problem][solver];
        if (static_cast<double>(entry.second) <= factor * static_cast<double>(m)) ++within;
      }
      const double fraction =
          best.empty() ? 0.0 : static_cast<double>(within) / static_cast<double>(best.size());
      char abuf[16];
      std::snprintf(abuf, sizeof(abuf), "%.1f", alpha);
      out << solver << ',' << abuf << ',' << fmt17(fraction) << '\n';
    }
  }
}

}  // namespace irnopt
