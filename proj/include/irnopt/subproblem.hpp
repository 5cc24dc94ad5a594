#ifndef IRNOPT_SUBPROBLEM_HPP
#define IRNOPT_SUBPROBLEM_HPP

#include <optional>

#include "irnopt/core.hpp"

namespace irnopt {

enum class CgResultKind {
  Certified,                 // conditions hold with lambda = 0
  NegativeCurvature,         // a search direction with p'Hp <= 0 appeared
  LimitWithoutCertificate,   // n iterations reached; iterate returned anyway
};

struct CgOutcome {
  CgResultKind kind = CgResultKind::NegativeCurvature;
  std::optional<StepCandidate> candidate{};
  std::int64_t cg_iterations = 0;
};

/// Truncated CG attempt on H s = -g from s = 0.  Stops immediately on
/// nonpositive curvature.  After each iteration the trial-step
/// conditions are checked with lambda = 0 using H s assembled from the
/// products CG already computed, so the checks cost no oracle calls.
/// Consumes exactly cg_iterations + 1 products: one per generated
/// direction, including the initial one.
CgOutcome cg_newton_step(const Problem& problem, const Vector& x, double fk, const Vector& g,
                         const SolverConfig& cfg, EvalCounters& counters);

/// Cubic-regularized step over expanding Krylov subspaces: each
/// subspace is solved by secular_root, the solution lifted, and the
/// subspace accepted once the lifted residual satisfies
/// ||g + (H + sigma ||s|| I) s|| <= kappa3 ||s||^2 or the subspace is
/// full-dimensional (or Lanczos broke down, in which case the reduced
/// solve is exact).  Each tested subspace spends one oracle product on
/// the lifted residual.  Returns a candidate with lambda = sigma ||s||.
StepCandidate cubic_krylov_step(const Problem& problem, const Vector& x, double fk,
                                const Vector& g, double sigma, const SolverConfig& cfg,
                                EvalCounters& counters);

}  // namespace irnopt

#endif  // IRNOPT_SUBPROBLEM_HPP
