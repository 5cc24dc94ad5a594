#include "irnopt/driver.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "irnopt/subproblem.hpp"

namespace irnopt {

namespace {

using Clock = std::chrono::steady_clock;

double inf_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>(); }

double clamp(double x, double lo, double hi) { return std::min(std::max(x, lo), hi); }

struct LoopShared {
  Vector x;
  double f = 0.0;
  Vector g;
  double g0_inf = 0.0;
  EvalCounters counters;
  Clock::time_point start;
};

bool finite(const Vector& v) { return v.allFinite(); }

void finalize(RunReport& rep, const LoopShared& st, Status status) {
  rep.status = status;
  rep.final_x = st.x;
  rep.final_f = st.f;
  rep.final_grad_inf_norm = inf_norm(st.g);
  rep.hvp_count = st.counters.hvp_count;
  rep.tridiag_factorizations = st.counters.tridiag_factorizations;
}

// Returns the terminal status when an outer-loop limit fires, nullopt
// to keep iterating.
std::optional<Status> loop_gate(const LoopShared& st, std::int64_t k, const SolverConfig& cfg) {
  if (!std::isfinite(st.f) || !finite(st.g)) return Status::SubproblemFailure;
  if (terminated(st.g, st.g0_inf, cfg)) return Status::Converged;
  if (k >= cfg.max_iters) return Status::MaxIters;
  const double elapsed = std::chrono::duration<double>(Clock::now() - st.start).count();
  if (elapsed > cfg.time_limit_secs) return Status::TimeLimit;
  return std::nullopt;
}

}  // namespace

bool terminated(const Vector& g, double g0_inf, const SolverConfig& cfg) {
  return inf_norm(g) <= cfg.grad_tol * std::max(g0_inf, 1.0);
}

RunReport irnewton_solve(const Problem& problem, const Vector& x0, const SolverConfig& cfg) {
  cfg.validate();
  RunReport rep;
  rep.solver = "irnewton";

  LoopShared st;
  st.start = Clock::now();
  st.x = x0;
  st.f = problem.eval_f(st.x);
  st.g = problem.eval_grad(st.x);
  st.g0_inf = inf_norm(st.g);

  Bounds bounds{0.0, cfg.sigmaU0};
  double sigma_aux = cfg.sigma0;

  for (std::int64_t k = 0;; ++k) {
    if (auto stop = loop_gate(st, k, cfg)) {
      finalize(rep, st, *stop);
      return rep;
    }

    IterationRecord rec;
    rec.k = k;
    rec.f = st.f;
    rec.gnorm_inf = inf_norm(st.g);
    rec.sigma_lo_start = bounds.sigma_lo;
    rec.sigma_hi_start = bounds.sigma_hi;

    const std::int64_t hvp0 = st.counters.hvp_count;
    const std::int64_t tf0 = st.counters.tridiag_factorizations;

    // trial step: CG while sigma_lo = 0, cubic otherwise
    StepCandidate cand;
    bool have_candidate = false;
    if (bounds.sigma_lo == 0.0) {
      const CgOutcome cg = cg_newton_step(problem, st.x, st.f, st.g, cfg, st.counters);
      if (cg.kind == CgResultKind::NegativeCurvature) {
        // revert to the regularized scheme within the same iteration;
        // raising sigma_hi keeps the bound pair feasible
        bounds.sigma_lo = sigma_aux;
        bounds.sigma_hi = std::max(bounds.sigma_hi, bounds.sigma_lo);
        rec.cg_failed = true;
      } else {
        cand = *cg.candidate;
        have_candidate = true;
      }
    }
    if (!have_candidate) {
      cand = cubic_krylov_step(problem, st.x, st.f, st.g, bounds.sigma_lo, cfg, st.counters);
    }
    rec.sigma_lo_used = bounds.sigma_lo;
    rec.sigma_hi_used = bounds.sigma_hi;

    const double snorm = cand.s.norm();
    if (!(snorm > 0.0) || !std::isfinite(snorm) || !finite(cand.s)) {
      rep.iterations = k;  // this iteration produced no usable trial
      finalize(rep, st, Status::SubproblemFailure);
      return rep;
    }

    rec.step_norm = snorm;
    rec.lambda = cand.lambda;
    rec.newton = cand.lambda == 0.0;
    rec.subspace_dim = cand.subspace_dim;
    rec.model_decrease = cand.model_decrease;
    rec.xi_min = cand.xi_min.value_or(std::numeric_limits<double>::quiet_NaN());
    rec.cond_ok = check_step_conditions(st.f, st.g, cand, cand.h_norm_est, cfg).all();

    const double f_trial = problem.eval_f(st.x + cand.s);
    if (!std::isfinite(f_trial)) {
      rep.iterations = k;
      finalize(rep, st, Status::SubproblemFailure);
      return rep;
    }
    const double rho = acceptance_ratio(st.f, f_trial, snorm);
    const bool accepted = rho >= cfg.eta;
    rec.rho = rho;
    rec.accepted = accepted;

    // auxiliary sigma update, driven by the bounds in effect this
    // iteration
    if (rec.sigma_lo_used > 0.0) {
      sigma_aux = accepted ? std::max(cfg.sigma_min, cfg.gamma0 * sigma_aux)
                           : std::min(cfg.gammaL * sigma_aux, cfg.sigma_max);
    }
    rec.sigma_aux = sigma_aux;

    if (accepted) {
      st.x += cand.s;
      st.f = f_trial;
      st.g = problem.eval_grad(st.x);
      ++rep.accepted;
      bounds.sigma_lo = 0.0;  // sigma_hi carries over
    } else if (cand.lambda < cfg.sigma_min * snorm) {
      bounds.sigma_lo = clamp(sigma_aux, cfg.sigma_min, cfg.sigma_max);
      bounds.sigma_hi = std::max(bounds.sigma_lo, std::min(bounds.sigma_hi, cfg.sigma_max));
    } else {
      const double ratio = cand.lambda / snorm;
      bounds.sigma_lo = cfg.gammaL * ratio;
      bounds.sigma_hi = cfg.gammaU * ratio;
    }

    if (rec.newton) ++rep.newton_steps;
    rec.hvp_used = st.counters.hvp_count - hvp0;
    rec.tfact_used = st.counters.tridiag_factorizations - tf0;
    rep.history.push_back(rec);
    rep.iterations = k + 1;

    if (snorm < cfg.step_norm_floor) {
      finalize(rep, st, Status::StepNormFloor);
      return rep;
    }
  }
}

RunReport iarc_solve(const Problem& problem, const Vector& x0, const SolverConfig& cfg) {
  cfg.validate();
  RunReport rep;
  rep.solver = "iarc";

  LoopShared st;
  st.start = Clock::now();
  st.x = x0;
  st.f = problem.eval_f(st.x);
  st.g = problem.eval_grad(st.x);
  st.g0_inf = inf_norm(st.g);

  double sigma = cfg.sigma0;

  for (std::int64_t k = 0;; ++k) {
    if (auto stop = loop_gate(st, k, cfg)) {
      finalize(rep, st, *stop);
      return rep;
    }

    IterationRecord rec;
    rec.k = k;
    rec.f = st.f;
    rec.gnorm_inf = inf_norm(st.g);
    rec.sigma_lo_start = sigma;
    rec.sigma_hi_start = sigma;
    rec.sigma_lo_used = sigma;
    rec.sigma_hi_used = sigma;

    const std::int64_t hvp0 = st.counters.hvp_count;
    const std::int64_t tf0 = st.counters.tridiag_factorizations;

    const StepCandidate cand = cubic_krylov_step(problem, st.x, st.f, st.g, sigma, cfg, st.counters);
    const double snorm = cand.s.norm();
    if (!(snorm > 0.0) || !std::isfinite(snorm) || !finite(cand.s)) {
      rep.iterations = k;
      finalize(rep, st, Status::SubproblemFailure);
      return rep;
    }

    rec.step_norm = snorm;
    rec.lambda = cand.lambda;
    rec.subspace_dim = cand.subspace_dim;
    rec.model_decrease = cand.model_decrease;
    rec.xi_min = cand.xi_min.value_or(std::numeric_limits<double>::quiet_NaN());
    rec.cond_ok = check_step_conditions(st.f, st.g, cand, cand.h_norm_est, cfg).all();

    const double cubic_decrease = cand.model_decrease - 0.5 * sigma * snorm * snorm * snorm;
    const double f_trial = problem.eval_f(st.x + cand.s);
    if (!(cubic_decrease > 0.0) || !std::isfinite(f_trial)) {
      rep.iterations = k;
      finalize(rep, st, Status::SubproblemFailure);
      return rep;
    }
    const double ratio = (st.f - f_trial) / cubic_decrease;
    const bool accepted = ratio >= cfg.eta1;
    rec.rho = ratio;
    rec.accepted = accepted;

    if (ratio >= cfg.eta2) {
      sigma = std::max(cfg.sigma_min, cfg.gamma0 * sigma);
    } else if (ratio < cfg.eta1) {
      sigma = cfg.gammaL * sigma;
    }
    rec.sigma_aux = sigma;

    if (accepted) {
      st.x += cand.s;
      st.f = f_trial;
      st.g = problem.eval_grad(st.x);
      ++rep.accepted;
    }

    rec.hvp_used = st.counters.hvp_count - hvp0;
    rec.tfact_used = st.counters.tridiag_factorizations - tf0;
    rep.history.push_back(rec);
    rep.iterations = k + 1;

    if (snorm < cfg.step_norm_floor) {
      finalize(rep, st, Status::StepNormFloor);
      return rep;
    }
  }
}

}  // namespace irnopt
