#include "irnopt/subproblem.hpp"

#include <cmath>
#include <stdexcept>

#include "irnopt/linalg.hpp"

namespace irnopt {

CgOutcome cg_newton_step(const Problem& problem, const Vector& x, double fk, const Vector& g,
                         const SolverConfig& cfg, EvalCounters& counters) {
  const double gnorm = g.norm();
  if (!(gnorm > 0.0)) throw std::invalid_argument("cg_newton_step: gradient must be nonzero");
  const int n = problem.dim;
  auto hvp = [&](const Vector& v) {
    ++counters.hvp_count;
    return problem.eval_hvp(x, v);
  };

  CgOutcome out;
  Vector s = Vector::Zero(n);
  Vector r = g;  // residual g + H s
  Vector p = -g;
  Vector hp = hvp(p);
  double rr = r.squaredNorm();
  double h_est = 0.0;

  while (true) {
    const double curv = p.dot(hp);
    if (curv <= 0.0) {
      out.kind = CgResultKind::NegativeCurvature;
      return out;
    }
    h_est = std::max(h_est, std::abs(curv) / p.squaredNorm());
    const double step = rr / curv;
    s += step * p;
    r += step * hp;
    ++out.cg_iterations;

    const double rr_next = r.squaredNorm();
    const double mix = rr_next / rr;
    rr = rr_next;
    p = -r + mix * p;
    hp = hvp(p);  // one product per generated direction

    StepCandidate cand;
    cand.s = s;
    cand.lambda = 0.0;
    cand.hs = r - g;  // the linear combination of stored products
    cand.model_decrease = -(g.dot(s) + 0.5 * s.dot(cand.hs));
    cand.residual = g + cand.hs;  // recomputable from the cached fields
    cand.subspace_dim = 0;
    cand.h_norm_est = h_est;

    const double snorm = s.norm();
    const ConditionReport rep = check_step_conditions(fk, g, cand, h_est, cfg);
    const bool resid_ok =
        cand.residual.norm() <= cfg.cg_residual_safety * cfg.kappa3 * snorm * snorm;
    if (rep.c_a && rep.c_b && resid_ok && !rep.degenerate) {
      out.kind = CgResultKind::Certified;
      out.candidate = std::move(cand);
      return out;
    }
    if (out.cg_iterations >= n || !(rr > 0.0)) {
      out.kind = CgResultKind::LimitWithoutCertificate;
      out.candidate = std::move(cand);
      return out;
    }
  }
}

StepCandidate cubic_krylov_step(const Problem& problem, const Vector& x, double fk,
                                const Vector& g, double sigma, const SolverConfig& cfg,
                                EvalCounters& counters) {
  (void)fk;  // the decrease is tracked relative to f_k
  if (!(sigma > 0.0)) throw std::invalid_argument("cubic_krylov_step: sigma must be positive");
  const int n = problem.dim;
  auto hvp = [&](const Vector& v) {
    ++counters.hvp_count;
    return problem.eval_hvp(x, v);
  };

  KrylovWorkspace ws = lanczos_init(g, hvp);
  double warm = 0.0;
  while (true) {
    const Tridiag T = ws.tridiag();
    const SecularResult sec = secular_root(T, ws.gamma, sigma, &counters, warm);
    warm = sec.shift;

    StepCandidate cand;
    cand.s = ws.lift(sec.v);
    const double snorm = cand.s.norm();
    cand.lambda = sigma * snorm;
    cand.hs = hvp(cand.s);  // lifted residual needs the true product
    cand.model_decrease = -(g.dot(cand.s) + 0.5 * cand.s.dot(cand.hs));
    cand.residual = g + cand.hs + cand.lambda * cand.s;
    cand.subspace_dim = ws.m();
    cand.xi_min = sec.xi_min;
    cand.h_norm_est = std::max(std::abs(sec.xi_min), std::abs(tridiag_largest_eig(T)));

    const bool exhausted = ws.breakdown || ws.m() >= n;
    const bool resid_ok = cand.residual.norm() <= cfg.kappa3 * snorm * snorm;
    bool second_ok = true;
    if (cfg.check_second_order) {
      const double k4 = cfg.kappa4.value_or(1.5 * sigma);
      second_ok = check_second_order(sec.xi_min, snorm, k4);
    }
    if ((resid_ok && second_ok) || exhausted) {
      return cand;
    }
    lanczos_expand(ws, hvp);
  }
}

}  // namespace irnopt
