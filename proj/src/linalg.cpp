#include "irnopt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace irnopt {

namespace {

constexpr double kTinyPivot = 1e-300;

void reorthogonalize(const std::vector<Vector>& basis, Vector& w) {
  // two classical Gram-Schmidt passes
  for (int pass = 0; pass < 2; ++pass) {
    for (const Vector& b : basis) {
      w -= b.dot(w) * b;
    }
  }
}

// LDL' factorization of T + shift I.  Valid only when every pivot is
// positive; callers treat failure as "shift too small".
class LdlFactor {
 public:
  static std::optional<LdlFactor> compute(const Tridiag& T, double shift) {
    const int m = T.dim();
    LdlFactor fac;
    fac.d_.resize(m);
    fac.l_.resize(std::max(0, m - 1));
    double d = T.diag[0] + shift;
    if (!(d > 0.0)) return std::nullopt;
    fac.d_[0] = d;
    for (int i = 0; i + 1 < m; ++i) {
      const double l = T.offdiag[i] / fac.d_[i];
      fac.l_[i] = l;
      d = T.diag[i + 1] + shift - l * T.offdiag[i];
      if (!(d > 0.0)) return std::nullopt;
      fac.d_[i + 1] = d;
    }
    return fac;
  }

  Vector solve(const Vector& rhs) const {
    const int m = static_cast<int>(d_.size());
    Vector x = rhs;
    for (int i = 1; i < m; ++i) x[i] -= l_[i - 1] * x[i - 1];
    for (int i = 0; i < m; ++i) x[i] /= d_[i];
    for (int i = m - 2; i >= 0; --i) x[i] -= l_[i] * x[i + 1];
    return x;
  }

 private:
  std::vector<double> d_;
  std::vector<double> l_;
};

// Number of eigenvalues of T strictly below x, from the signs of the
// safeguarded Sturm recurrence.
int sturm_count_below(const Tridiag& T, double x) {
  const int m = T.dim();
  int count = 0;
  double d = T.diag[0] - x;
  if (d == 0.0) d = -kTinyPivot;
  if (d < 0.0) ++count;
  for (int i = 1; i < m; ++i) {
    d = (T.diag[i] - x) - T.offdiag[i - 1] * T.offdiag[i - 1] / d;
    if (d == 0.0) d = -kTinyPivot;
    if (d < 0.0) ++count;
  }
  return count;
}

}  // namespace

double Tridiag::inf_norm() const {
  const int m = dim();
  double best = 0.0;
  for (int i = 0; i < m; ++i) {
    double row = std::abs(diag[i]);
    if (i > 0) row += std::abs(offdiag[i - 1]);
    if (i + 1 < m) row += std::abs(offdiag[i]);
    best = std::max(best, row);
  }
  return best;
}

Tridiag KrylovWorkspace::tridiag() const {
  return Tridiag{alpha, beta};
}

Vector KrylovWorkspace::lift(const Vector& v) const {
  if (v.size() != m()) throw std::invalid_argument("lift: reduced vector has wrong dimension");
  Vector s = Vector::Zero(ambient_dim());
  for (int i = 0; i < m(); ++i) s += v[i] * basis[i];
  return s;
}

KrylovWorkspace lanczos_init(const Vector& g, const HvpFn& hvp) {
  const double gnorm = g.norm();
  if (!(gnorm > 0.0)) throw std::invalid_argument("lanczos_init: gradient must be nonzero");
  KrylovWorkspace ws;
  ws.gamma = gnorm;
  Vector r = g / gnorm;
  Vector u = hvp(r);
  const double a = r.dot(u);
  Vector w = u - a * r;
  ws.basis.push_back(std::move(r));
  reorthogonalize(ws.basis, w);
  ws.alpha.push_back(a);
  ws.beta_next = w.norm();
  ws.resid_next = std::move(w);
  const double scale = std::max({u.norm(), std::abs(a), kTinyPivot});
  ws.breakdown = ws.beta_next <= 1e-12 * scale;
  return ws;
}

void lanczos_expand(KrylovWorkspace& ws, const HvpFn& hvp) {
  if (ws.breakdown) throw std::logic_error("lanczos_expand: invariant subspace reached");
  if (ws.m() >= ws.ambient_dim()) throw std::logic_error("lanczos_expand: already full-dimensional");
  Vector r = ws.resid_next / ws.beta_next;
  // cleanup pass; the pending residual was already reorthogonalized
  for (const Vector& b : ws.basis) r -= b.dot(r) * b;
  const double rnorm = r.norm();
  if (rnorm <= 1e-14) {
    ws.breakdown = true;
    throw std::logic_error("lanczos_expand: residual vanished during reorthogonalization");
  }
  r /= rnorm;
  Vector u = hvp(r);
  const double a = r.dot(u);
  Vector w = u - a * r - ws.beta_next * ws.basis.back();
  ws.beta.push_back(ws.beta_next);
  ws.alpha.push_back(a);
  ws.basis.push_back(std::move(r));
  reorthogonalize(ws.basis, w);
  ws.beta_next = w.norm();
  ws.resid_next = std::move(w);
  const double scale = std::max({u.norm(), std::abs(a), ws.beta.back(), kTinyPivot});
  if (ws.beta_next <= 1e-12 * scale) ws.breakdown = true;
}

double tridiag_smallest_eig(const Tridiag& T) {
  const int m = T.dim();
  if (m < 1) throw std::invalid_argument("tridiag_smallest_eig: empty matrix");
  // Gerschgorin bounds
  double lo = T.diag[0], hi = T.diag[0];
  for (int i = 0; i < m; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(T.offdiag[i - 1]);
    if (i + 1 < m) r += std::abs(T.offdiag[i]);
    lo = std::min(lo, T.diag[i] - r);
    hi = std::max(hi, T.diag[i] + r);
  }
  const double tol = 1e-12 * std::max(1.0, T.inf_norm());
  lo -= tol;
  hi += tol;
  // invariant: count(lo) == 0, count(hi) >= 1
  for (int iter = 0; iter < 2000 && hi - lo > tol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count_below(T, mid) >= 1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double tridiag_largest_eig(const Tridiag& T) {
  Tridiag flipped = T;
  for (double& d : flipped.diag) d = -d;
  return -tridiag_smallest_eig(flipped);
}

std::optional<Vector> solve_shifted_tridiag(const Tridiag& T, double lam, const Vector& rhs,
                                            EvalCounters* counters) {
  if (rhs.size() != T.dim()) throw std::invalid_argument("solve_shifted_tridiag: size mismatch");
  if (counters) ++counters->tridiag_factorizations;
  auto fac = LdlFactor::compute(T, lam);
  if (!fac) return std::nullopt;
  return fac->solve(rhs);
}

SecularResult secular_root(const Tridiag& T, double gamma, double sigma,
                           EvalCounters* counters, double warm_shift) {
  if (!(gamma > 0.0)) throw std::invalid_argument("secular_root: gamma must be positive");
  if (!(sigma > 0.0)) throw std::invalid_argument("secular_root: sigma must be positive");
  const int m = T.dim();
  const double sigma_eff = 1.5 * sigma;

  SecularResult out;
  out.xi_min = tridiag_smallest_eig(T);
  const double lo = std::max(0.0, -out.xi_min);
  const double tnorm = std::max(1.0, T.inf_norm());

  Vector rhs = Vector::Zero(m);
  rhs[0] = gamma;

  struct Eval {
    double mu = 0.0;
    Vector v;
    double vnorm = 0.0;
    double phi = 0.0;  // sigma_eff * ||v(mu)|| - mu, strictly decreasing in mu
    LdlFactor fac;
  };
  auto evaluate = [&](double mu) -> std::optional<Eval> {
    ++out.factorizations;
    if (counters) ++counters->tridiag_factorizations;
    auto fac = LdlFactor::compute(T, mu);
    if (!fac) return std::nullopt;
    Eval e;
    e.mu = mu;
    e.v = -fac->solve(rhs);
    e.vnorm = e.v.norm();
    e.phi = sigma_eff * e.vnorm - mu;
    e.fac = std::move(*fac);
    return e;
  };

  // left end of the shift interval
  std::optional<Eval> left;
  if (out.xi_min > 0.0) {
    left = evaluate(0.0);
  } else {
    double eps = 1e-12 * std::max(tnorm, lo);
    for (int tries = 0; tries < 120 && !left; ++tries, eps *= 4.0) {
      left = evaluate(lo + eps);
    }
  }
  if (!left) throw std::runtime_error("secular_root: factorization failed near the boundary shift");

  if (left->phi <= 0.0) {
    // Hard case: the gradient lacks enough of a leftmost-eigenvector
    // component, so the equation has no root right of the boundary.
    // Augment v with a leftmost eigenvector u so that
    // sigma_eff * ||v + tau u|| equals the boundary shift.
    Vector u = Vector::Ones(m);
    for (int i = 0; i < m; ++i) u[i] += 0.01 * i;
    u.normalize();
    for (int it = 0; it < 4; ++it) {
      u = left->fac.solve(u);
      u.normalize();
    }
    const double target = left->mu / sigma_eff;
    const double uv = u.dot(left->v);
    const double disc = uv * uv + target * target - left->vnorm * left->vnorm;
    const double tau = -uv + std::sqrt(std::max(0.0, disc));
    out.v = left->v + tau * u;
    out.shift = left->mu;
    out.lam = sigma * out.v.norm();
    out.hard_case = true;
    return out;
  }

  // bracket the root: phi(bl) > 0 > phi(bh)
  double bl = left->mu;
  Eval cur = *left;
  double bh = std::max({1.0, 2.0 * bl, warm_shift});
  for (int tries = 0; tries < 500; ++tries) {
    auto e = evaluate(bh);
    if (e && e->phi < 0.0) {
      cur = std::move(*e);
      break;
    }
    if (e) bl = e->mu;
    bh *= 2.0;
    if (tries == 499) throw std::runtime_error("secular_root: failed to bracket the root");
  }
  bh = cur.mu;

  // warm start or fixed-point guess, then safeguarded Newton on
  // psi(mu) = 1/||v(mu)|| - sigma_eff/mu
  double guess = (warm_shift > bl && warm_shift < bh) ? warm_shift : sigma_eff * left->vnorm;
  if (!(guess > bl && guess < bh)) guess = 0.5 * (bl + bh);
  if (auto e = evaluate(guess)) cur = std::move(*e);

  const double tol = 1e-13;
  for (int iter = 0; iter < 200; ++iter) {
    if (std::abs(cur.phi) <= tol * std::max(1.0, cur.mu)) break;
    if (cur.phi > 0.0) {
      bl = cur.mu;
    } else {
      bh = cur.mu;
    }
    if (bh - bl <= 1e-15 * std::max(1.0, bh)) break;
    double mu_next;
    if (cur.mu > 0.0) {
      const Vector z = cur.fac.solve(cur.v);
      const double psi = 1.0 / cur.vnorm - sigma_eff / cur.mu;
      const double dpsi =
          cur.v.dot(z) / (cur.vnorm * cur.vnorm * cur.vnorm) + sigma_eff / (cur.mu * cur.mu);
      mu_next = cur.mu - psi / dpsi;
    } else {
      mu_next = 0.5 * (bl + bh);
    }
    if (!(mu_next > bl && mu_next < bh) || !std::isfinite(mu_next)) {
      mu_next = 0.5 * (bl + bh);
    }
    auto e = evaluate(mu_next);
    if (!e) {
      bl = std::max(bl, mu_next);
      continue;
    }
    cur = std::move(*e);
  }

  out.v = std::move(cur.v);
  out.shift = cur.mu;
  out.lam = sigma * cur.vnorm;
  return out;
}

}  // namespace irnopt
