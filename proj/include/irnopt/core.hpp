#ifndef IRNOPT_CORE_HPP
#define IRNOPT_CORE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace irnopt {

using Vector = Eigen::VectorXd;

/// Matrix-free objective oracle: function value, gradient, and
/// Hessian-vector product, all evaluated at arbitrary points of
/// dimension dim.  Instances are immutable and safe to evaluate
/// concurrently from independent solver runs.
struct Problem {
  int dim = 0;
  std::function<double(const Vector&)> eval_f;
  std::function<Vector(const Vector&)> eval_grad;
  std::function<Vector(const Vector&, const Vector&)> eval_hvp;  // (x, v) -> H(x) v
};

/// Work counters shared by the subproblem kernels.  hvp_count tracks
/// oracle Hessian-vector products, tridiag_factorizations tracks LDL'
/// factorizations of shifted tridiagonal matrices.
struct EvalCounters {
  std::int64_t hvp_count = 0;
  std::int64_t tridiag_factorizations = 0;
};

/// Solver parameters.  Defaults follow the reference configuration for
/// both drivers; validate() throws std::invalid_argument when ordering
/// constraints are violated.
struct SolverConfig {
  double eta = 1e-16;    // step acceptance threshold for irnewton
  double eta1 = 1e-16;   // iarc accept / sigma-hold lower threshold
  double eta2 = 1e-1;    // iarc sigma-decrease threshold
  double gamma0 = 2e-1;  // sigma decrease factor
  double gammaL = 1e+1;  // lower bound growth factor
  double gammaU = 2e+2;  // upper bound growth factor
  double sigma_min = 1e-10;
  double sigma_max = 1e+20;
  double kappa1 = 1.0;
  double kappa2 = 1.0;
  double kappa3 = 1.0;
  // Second-order diagnostic constant.  Unset means the per-iteration
  // rule 1.5 * (sigma_lo if positive, else 1) is applied at the call
  // site.
  std::optional<double> kappa4{};
  double grad_tol = 1e-6;
  std::int64_t max_iters = 1000000;
  double time_limit_secs = 14400.0;
  double step_norm_floor = 1e-20;
  double sigma0 = 1.0;     // initial auxiliary sigma
  double sigmaU0 = 1e+20;  // initial sigma upper bound
  bool check_second_order = false;
  double cg_residual_safety = 0.99;

  void validate() const;
};

/// A trial pair (s, lambda) together with the cached quantities the
/// step-condition checks need.  No oracle calls are required to audit
/// a candidate.
struct StepCandidate {
  Vector s;
  double lambda = 0.0;          // regularization value, sigma * ||s|| on the cubic path
  Vector hs;                    // cached H s
  double model_decrease = 0.0;  // f_k - q_k(s)
  Vector residual;              // g + hs + lambda * s, exactly as computed
  int subspace_dim = 0;         // Krylov dimension m, 0 for CG steps
  std::optional<double> xi_min{};  // smallest eigenvalue of the reduced Hessian, when available
  double h_norm_est = 0.0;         // lower estimate of ||H|| from the solve
};

/// Iteration-wise lower/upper bounds on lambda / ||s||.
struct Bounds {
  double sigma_lo = 0.0;
  double sigma_hi = 0.0;
};

enum class Status {
  Converged,
  MaxIters,
  TimeLimit,
  StepNormFloor,
  SubproblemFailure,
};

const char* to_string(Status status);

/// Per-iteration trace record.  sigma_lo/hi_start are the bounds
/// produced by the previous iteration's update rule; *_used are the
/// bounds in effect when the step was computed (they differ only when
/// the CG attempt failed and sigma_lo was reset within the iteration).
struct IterationRecord {
  std::int64_t k = 0;
  double f = 0.0;           // f_k before the step
  double gnorm_inf = 0.0;   // ||g_k||_inf
  double step_norm = 0.0;   // ||s_k||
  double lambda = 0.0;
  double rho = 0.0;         // acceptance ratio used by the driver
  bool accepted = false;
  bool newton = false;      // trial step had lambda == 0
  bool cg_failed = false;   // CG attempt abandoned, cubic path used
  double sigma_lo_start = 0.0;
  double sigma_hi_start = 0.0;
  double sigma_lo_used = 0.0;
  double sigma_hi_used = 0.0;
  double sigma_aux = 0.0;   // auxiliary sigma after this iteration's update
  bool cond_ok = false;     // check_step_conditions verdict on the trial
  double xi_min = 0.0;      // NaN when unavailable
  int subspace_dim = 0;
  double model_decrease = 0.0;
  std::int64_t hvp_used = 0;     // oracle products consumed this iteration
  std::int64_t tfact_used = 0;   // tridiagonal factorizations this iteration
};

struct RunReport {
  Status status = Status::SubproblemFailure;
  std::string solver;  // "irnewton" or "iarc"
  std::int64_t iterations = 0;
  std::int64_t accepted = 0;
  std::int64_t newton_steps = 0;
  std::int64_t hvp_count = 0;
  std::int64_t tridiag_factorizations = 0;
  Vector final_x;
  double final_f = 0.0;
  double final_grad_inf_norm = 0.0;
  std::vector<IterationRecord> history;
};

/// q(s) = fk + g's + 1/2 s'hs with hs supplied by the caller.
double quadratic_model(double fk, const Vector& g, const Vector& s, const Vector& hs);

/// c(s; sigma) = q(s) + 1/2 sigma ||s||^3.
double cubic_model(double fk, const Vector& g, const Vector& s, const Vector& hs, double sigma);

/// (fk - f_trial) / ||s||^3.  s_norm must be positive.
double acceptance_ratio(double fk, double f_trial, double s_norm);

/// Two-branch step measure: ||s|| when lambda = 0, otherwise
/// sqrt(g_norm * s_norm / lambda) / sqrt(6).
double delta_k(double g_norm, double s_norm, double lambda);

struct ConditionReport {
  bool c_a = false;
  bool c_b = false;
  bool c_c = false;
  bool degenerate = false;
  bool all() const { return c_a && c_b && c_c && !degenerate; }
};

/// Evaluates the three trial-step conditions from the candidate's
/// cached fields.  h_norm_est is any lower estimate of ||H|| available
/// to the caller; underestimating it only makes the decrease condition
/// stricter.  A zero-norm step reports degenerate with all conditions
/// false.
ConditionReport check_step_conditions(double fk, const Vector& g, const StepCandidate& cand,
                                      double h_norm_est, const SolverConfig& cfg);

/// Second-order diagnostic: xi_min >= -kappa4 * s_norm.
bool check_second_order(double xi_min, double s_norm, double kappa4);

}  // namespace irnopt

#endif  // IRNOPT_CORE_HPP
