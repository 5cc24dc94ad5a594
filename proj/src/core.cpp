#include "irnopt/core.hpp"

#include <cmath>
#include <stdexcept>

namespace irnopt {

namespace {

void require_dim(const Vector& v, Eigen::Index n, const char* what) {
  if (v.size() != n) {
    throw std::invalid_argument(std::string("dimension mismatch in ") + what);
  }
}

// lhs <= rhs up to a small relative cushion, so that conditions holding
// with an analytic margin are not flipped by rounding in the cached
// quantities.
bool leq(double lhs, double rhs) {
  const double tol = 1e-12 * std::max({1.0, std::abs(lhs), std::abs(rhs)});
  return lhs <= rhs + tol;
}

}  // namespace

void SolverConfig::validate() const {
  auto fail = [](const char* msg) { throw std::invalid_argument(msg); };
  if (!(eta > 0.0 && eta < 1.0)) fail("eta must lie in (0,1)");
  if (!(eta1 > 0.0 && eta1 <= eta2 && eta2 < 1.0)) fail("need 0 < eta1 <= eta2 < 1");
  if (!(gamma0 > 0.0 && gamma0 < 1.0)) fail("gamma0 must lie in (0,1)");
  if (!(gammaL > 1.0 && gammaL <= gammaU)) fail("need 1 < gammaL <= gammaU");
  if (!(sigma_min > 0.0 && sigma_min <= sigma_max)) fail("need 0 < sigma_min <= sigma_max");
  if (!(kappa1 > 0.0 && kappa2 > 0.0 && kappa3 > 0.0)) fail("kappa1..kappa3 must be positive");
  if (kappa4 && !(*kappa4 > 0.0)) fail("kappa4 must be positive when set");
  if (!(grad_tol > 0.0)) fail("grad_tol must be positive");
  if (max_iters < 1) fail("max_iters must be positive");
  if (!(time_limit_secs > 0.0)) fail("time_limit_secs must be positive");
  if (!(step_norm_floor > 0.0)) fail("step_norm_floor must be positive");
  if (!(sigma0 >= sigma_min && sigma0 <= sigma_max)) fail("sigma0 must lie in [sigma_min,sigma_max]");
  if (!(sigmaU0 >= sigma_min && sigmaU0 <= sigma_max)) fail("sigmaU0 must lie in [sigma_min,sigma_max]");
  if (!(cg_residual_safety > 0.0 && cg_residual_safety < 1.0)) fail("cg_residual_safety must lie in (0,1)");
}

const char* to_string(Status status) {
  switch (status) {
    case Status::Converged: return "Converged";
    case Status::MaxIters: return "MaxIters";
    case Status::TimeLimit: return "TimeLimit";
    case Status::StepNormFloor: return "StepNormFloor";
    case Status::SubproblemFailure: return "SubproblemFailure";
  }
  return "Unknown";
}

double quadratic_model(double fk, const Vector& g, const Vector& s, const Vector& hs) {
  require_dim(s, g.size(), "quadratic_model");
  require_dim(hs, g.size(), "quadratic_model");
  return fk + g.dot(s) + 0.5 * s.dot(hs);
}

double cubic_model(double fk, const Vector& g, const Vector& s, const Vector& hs, double sigma) {
  const double snorm = s.norm();
  return quadratic_model(fk, g, s, hs) + 0.5 * sigma * snorm * snorm * snorm;
}

double acceptance_ratio(double fk, double f_trial, double s_norm) {
  if (!(s_norm > 0.0)) {
    throw std::invalid_argument("acceptance_ratio: degenerate zero-norm step");
  }
  return (fk - f_trial) / (s_norm * s_norm * s_norm);
}

double delta_k(double g_norm, double s_norm, double lambda) {
  if (!(s_norm > 0.0)) {
    throw std::invalid_argument("delta_k: s_norm must be positive");
  }
  if (lambda == 0.0) return s_norm;
  return std::sqrt(g_norm * s_norm / lambda) / std::sqrt(6.0);
}

ConditionReport check_step_conditions(double fk, const Vector& g, const StepCandidate& cand,
                                      double h_norm_est, const SolverConfig& cfg) {
  (void)fk;  // the decrease is carried pre-computed in the candidate
  ConditionReport rep;
  const double snorm = cand.s.norm();
  if (!(snorm > 0.0) || !std::isfinite(snorm)) {
    rep.degenerate = true;
    return rep;
  }
  const double gnorm = g.norm();
  const double sn2 = snorm * snorm;
  const double sn3 = sn2 * snorm;
  const double lam = cand.lambda;

  const double delta = delta_k(gnorm, snorm, lam);
  const double required =
      gnorm / (6.0 * std::sqrt(2.0)) * std::min(gnorm / (1.0 + h_norm_est), delta);
  rep.c_a = leq(required, cand.model_decrease);

  const double sTg = cand.s.dot(g);
  const double sThs = cand.s.dot(cand.hs);
  const double sHls = sThs + lam * sn2;  // s'(H + lambda I)s
  const double lhs_b = sTg + sHls;       // s'(g + (H + lambda I)s)
  const double rhs_b = std::min(cfg.kappa1 * sn2, 0.5 * sHls + 0.5 * cfg.kappa2 * sn3);
  rep.c_b = leq(lhs_b, rhs_b);

  rep.c_c = leq(cand.residual.norm(), lam * snorm + cfg.kappa3 * sn2);
  return rep;
}

bool check_second_order(double xi_min, double s_norm, double kappa4) {
  return xi_min >= -kappa4 * s_norm;
}

}  // namespace irnopt
