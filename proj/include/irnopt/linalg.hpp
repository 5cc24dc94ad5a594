#ifndef IRNOPT_LINALG_HPP
#define IRNOPT_LINALG_HPP

#include <functional>
#include <optional>
#include <vector>

#include "irnopt/core.hpp"

namespace irnopt {

/// Symmetric tridiagonal matrix, single off-diagonal stored.
struct Tridiag {
  std::vector<double> diag;
  std::vector<double> offdiag;  // size diag.size() - 1

  int dim() const { return static_cast<int>(diag.size()); }
  double inf_norm() const;
};

using HvpFn = std::function<Vector(const Vector&)>;

/// Lanczos state with incremental expansion and full reorthogonalization.
/// basis holds the orthonormal columns of R; (alpha, beta) is the reduced
/// tridiagonal R'HR; the first basis vector is g/||g||, so the reduced
/// gradient is gamma * e1 by construction.
class KrylovWorkspace {
 public:
  std::vector<Vector> basis;
  std::vector<double> alpha;
  std::vector<double> beta;  // committed off-diagonals, size m-1
  double gamma = 0.0;        // ||g||
  bool breakdown = false;

  int m() const { return static_cast<int>(alpha.size()); }
  int ambient_dim() const { return basis.empty() ? 0 : static_cast<int>(basis.front().size()); }
  Tridiag tridiag() const;

  /// Lifts reduced coordinates: returns sum_i v_i basis[i].
  Vector lift(const Vector& v) const;

  // pending recurrence state for the next expansion
  Vector resid_next;
  double beta_next = 0.0;
};

/// Starts the Lanczos process from g (one oracle product consumed).
/// Throws std::invalid_argument when g = 0.
KrylovWorkspace lanczos_init(const Vector& g, const HvpFn& hvp);

/// Adds one basis vector (one oracle product consumed).  Requires
/// !breakdown and m < n; throws std::logic_error otherwise.
void lanczos_expand(KrylovWorkspace& ws, const HvpFn& hvp);

/// Smallest eigenvalue by bisection on the Sturm sequence (LDL'
/// inertia counts), to absolute tolerance 1e-12 * max(1, ||T||_inf).
double tridiag_smallest_eig(const Tridiag& T);

/// Largest eigenvalue via the same bisection on the sign-flipped matrix.
double tridiag_largest_eig(const Tridiag& T);

/// Solves (T + lam I) x = rhs by LDL' factorization, counting one
/// tridiagonal factorization.  Returns std::nullopt when a non-positive
/// pivot is encountered (lam too small); T is never mutated.
std::optional<Vector> solve_shifted_tridiag(const Tridiag& T, double lam, const Vector& rhs,
                                            EvalCounters* counters = nullptr);

struct SecularResult {
  double lam = 0.0;   // sigma * ||v||, the regularization value of the pair
  Vector v;           // minimizer of the reduced cubic
  double shift = 0.0;           // internal shift 1.5 * sigma * ||v|| >= max(0, -xi_min)
  double xi_min = 0.0;          // smallest eigenvalue of T
  bool hard_case = false;
  std::int64_t factorizations = 0;
};

/// Minimizes gamma e1'v + 1/2 v'Tv + 1/2 sigma ||v||^3 over R^m.
/// The minimizer satisfies (T + shift I) v = -gamma e1 with
/// shift = 1.5 sigma ||v|| and T + shift I positive semidefinite; the
/// root is located by safeguarded Newton iteration on the
/// reciprocal-norm equation.  warm_shift, when positive, seeds the
/// iteration.  Requires gamma > 0 and sigma > 0.
SecularResult secular_root(const Tridiag& T, double gamma, double sigma,
                           EvalCounters* counters = nullptr, double warm_shift = 0.0);

}  // namespace irnopt

#endif  // IRNOPT_LINALG_HPP
