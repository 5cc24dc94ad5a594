#ifndef IRNOPT_DRIVER_HPP
#define IRNOPT_DRIVER_HPP

#include "irnopt/core.hpp"

namespace irnopt {

/// Gradient termination rule: ||g||_inf <= grad_tol * max(g0_inf, 1).
bool terminated(const Vector& g, double g0_inf, const SolverConfig& cfg);

/// Hybrid driver: inexact Newton steps by truncated CG while
/// sigma_lo = 0, cubic-regularized Krylov steps otherwise, with the
/// bound updates of the outer framework and the auxiliary sigma
/// sequence.
RunReport irnewton_solve(const Problem& problem, const Vector& x0, const SolverConfig& cfg);

/// Baseline: every step from the cubic-regularized Krylov solve, the
/// regularization weight adapted by the three-case ratio rule.
RunReport iarc_solve(const Problem& problem, const Vector& x0, const SolverConfig& cfg);

}  // namespace irnopt

#endif  // IRNOPT_DRIVER_HPP
