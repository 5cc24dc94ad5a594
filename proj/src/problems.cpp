#include "irnopt/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace irnopt {

namespace {

Problem make_quadratic(Vector d) {
  const int n = static_cast<int>(d.size());
  Problem p;
  p.dim = n;
  p.eval_f = [d](const Vector& x) { return 0.5 * x.dot(d.cwiseProduct(x)); };
  p.eval_grad = [d](const Vector& x) { return Vector(d.cwiseProduct(x)); };
  p.eval_hvp = [d](const Vector&, const Vector& v) { return Vector(d.cwiseProduct(v)); };
  return p;
}

// chained Rosenbrock on consecutive pairs, even dimension
Problem make_rosenbrock(int n) {
  Problem p;
  p.dim = n;
  p.eval_f = [n](const Vector& x) {
    double f = 0.0;
    for (int i = 0; i < n; i += 2) {
      const double a = x[i], b = x[i + 1];
      const double t = b - a * a;
      f += 100.0 * t * t + (1.0 - a) * (1.0 - a);
    }
    return f;
  };
  p.eval_grad = [n](const Vector& x) {
    Vector g(n);
    for (int i = 0; i < n; i += 2) {
      const double a = x[i], b = x[i + 1];
      const double t = b - a * a;
      g[i] = -400.0 * a * t - 2.0 * (1.0 - a);
      g[i + 1] = 200.0 * t;
    }
    return g;
  };
  p.eval_hvp = [n](const Vector& x, const Vector& v) {
    Vector hv(n);
    for (int i = 0; i < n; i += 2) {
      const double a = x[i], b = x[i + 1];
      const double haa = 1200.0 * a * a - 400.0 * b + 2.0;
      const double hab = -400.0 * a;
      hv[i] = haa * v[i] + hab * v[i + 1];
      hv[i + 1] = hab * v[i] + 200.0 * v[i + 1];
    }
    return hv;
  };
  return p;
}

Problem make_powell() {
  Problem p;
  p.dim = 4;
  p.eval_f = [](const Vector& x) {
    const double t1 = x[0] + 10.0 * x[1];
    const double t2 = x[2] - x[3];
    const double t3 = x[1] - 2.0 * x[2];
    const double t4 = x[0] - x[3];
    return t1 * t1 + 5.0 * t2 * t2 + t3 * t3 * t3 * t3 + 10.0 * t4 * t4 * t4 * t4;
  };
  p.eval_grad = [](const Vector& x) {
    const double t1 = x[0] + 10.0 * x[1];
    const double t2 = x[2] - x[3];
    const double t3 = x[1] - 2.0 * x[2];
    const double t4 = x[0] - x[3];
    Vector g(4);
    g[0] = 2.0 * t1 + 40.0 * t4 * t4 * t4;
    g[1] = 20.0 * t1 + 4.0 * t3 * t3 * t3;
    g[2] = 10.0 * t2 - 8.0 * t3 * t3 * t3;
    g[3] = -10.0 * t2 - 40.0 * t4 * t4 * t4;
    return g;
  };
  p.eval_hvp = [](const Vector& x, const Vector& v) {
    const double t3 = x[1] - 2.0 * x[2];
    const double t4 = x[0] - x[3];
    const double q3 = 12.0 * t3 * t3;
    const double q4 = 120.0 * t4 * t4;
    Vector hv(4);
    hv[0] = (2.0 + q4) * v[0] + 20.0 * v[1] - q4 * v[3];
    hv[1] = 20.0 * v[0] + (200.0 + q3) * v[1] - 2.0 * q3 * v[2];
    hv[2] = -2.0 * q3 * v[1] + (10.0 + 4.0 * q3) * v[2] - 10.0 * v[3];
    hv[3] = -q4 * v[0] - 10.0 * v[2] + (10.0 + q4) * v[3];
    return hv;
  };
  return p;
}

// separable f(x) = sum(1 - cos x_i); concave near the start, convex at
// the minimizers
Problem make_trig(int n) {
  Problem p;
  p.dim = n;
  p.eval_f = [n](const Vector& x) {
    double f = 0.0;
    for (int i = 0; i < n; ++i) f += 1.0 - std::cos(x[i]);
    return f;
  };
  p.eval_grad = [](const Vector& x) { return Vector(x.array().sin()); };
  p.eval_hvp = [](const Vector& x, const Vector& v) {
    return Vector(x.array().cos() * v.array());
  };
  return p;
}

// convex but strongly non-quadratic; full Newton steps from the flat
// tails overshoot badly
Problem make_logcosh(int n) {
  Problem p;
  p.dim = n;
  p.eval_f = [n](const Vector& x) {
    // log(2 cosh t) = |t| + log1p(exp(-2|t|)), overflow-safe
    double f = 0.0;
    for (int i = 0; i < n; ++i) {
      const double t = std::abs(x[i]);
      f += t + std::log1p(std::exp(-2.0 * t));
    }
    return f;
  };
  p.eval_grad = [](const Vector& x) { return Vector(x.array().tanh()); };
  p.eval_hvp = [](const Vector& x, const Vector& v) {
    Vector c = x.array().cosh();
    return Vector(v.array() / (c.array() * c.array()));
  };
  return p;
}

// double well with steep quartic walls: local maximum at the origin,
// minima at +-1/sqrt(2a); unregularized steps from near the origin
// overshoot far up the walls
Problem make_double_well(int n, double a) {
  Problem p;
  p.dim = n;
  p.eval_f = [n, a](const Vector& x) {
    double f = 0.0;
    for (int i = 0; i < n; ++i) {
      const double t = x[i] * x[i];
      f += a * t * t - t;
    }
    return f;
  };
  p.eval_grad = [a](const Vector& x) {
    return Vector(4.0 * a * x.array().cube() - 2.0 * x.array());
  };
  p.eval_hvp = [a](const Vector& x, const Vector& v) {
    return Vector((12.0 * a * x.array().square() - 2.0) * v.array());
  };
  return p;
}

std::vector<ProblemSpec> build_registry() {
  std::vector<ProblemSpec> specs;

  {
    ProblemSpec s;
    s.name = "rosenbrock2";
    s.dim = 2;
    s.x0 = Vector(2);
    s.x0 << -1.2, 1.0;
    s.known_f_min = 0.0;
    s.factory = [] { return make_rosenbrock(2); };
    specs.push_back(std::move(s));
  }
  {
    ProblemSpec s;
    s.name = "rosenbrock10";
    s.dim = 10;
    s.x0 = Vector(10);
    for (int i = 0; i < 10; i += 2) {
      s.x0[i] = -1.2;
      s.x0[i + 1] = 1.0;
    }
    s.known_f_min = 0.0;
    s.factory = [] { return make_rosenbrock(10); };
    specs.push_back(std::move(s));
  }
  {
    ProblemSpec s;
    s.name = "quadratic5";
    s.dim = 5;
    s.x0 = Vector(5);
    for (int i = 0; i < 5; ++i) s.x0[i] = (i % 2 == 0 ? 1.0 : -1.0) * 1e-3;
    s.known_f_min = 0.0;
    s.convex_quadratic = true;
    s.factory = [] {
      Vector d(5);
      d << 1, 2, 3, 4, 5;
      return make_quadratic(d);
    };
    specs.push_back(std::move(s));
  }
  {
    // condition number 1e4 with a clustered spectrum, so Krylov solves
    // stay short
    ProblemSpec s;
    s.name = "quad_illcond16";
    s.dim = 16;
    s.x0 = Vector::Constant(16, 1e-3);
    s.known_f_min = 0.0;
    s.convex_quadratic = true;
    s.factory = [] {
      Vector d(16);
      for (int i = 0; i < 16; ++i) d[i] = std::pow(10.0, std::min(4, i / 3));
      return make_quadratic(d);
    };
    specs.push_back(std::move(s));
  }
  {
    // indefinite Hessian; the start lies in the positive eigenspace so
    // runs terminate instead of descending forever
    ProblemSpec s;
    s.name = "quad_indef6";
    s.dim = 6;
    s.x0 = Vector(6);
    s.x0 << 0.5, 0.5, 0.0, 0.5, 0.0, 0.5;
    s.factory = [] {
      Vector d(6);
      d << 1.0, 2.0, -0.5, 3.0, -2.0, 4.0;
      return make_quadratic(d);
    };
    specs.push_back(std::move(s));
  }
  {
    ProblemSpec s;
    s.name = "powell4";
    s.dim = 4;
    s.x0 = Vector(4);
    s.x0 << 3.0, -1.0, 0.0, 1.0;
    s.known_f_min = 0.0;
    s.factory = [] { return make_powell(); };
    specs.push_back(std::move(s));
  }
  {
    ProblemSpec s;
    s.name = "trig8";
    s.dim = 8;
    s.x0 = Vector(8);
    for (int i = 0; i < 8; ++i) s.x0[i] = 2.0 + 0.5 * (i % 3);
    s.known_f_min = 0.0;
    s.factory = [] { return make_trig(8); };
    specs.push_back(std::move(s));
  }
  {
    ProblemSpec s;
    s.name = "logcosh6";
    s.dim = 6;
    s.x0 = Vector(6);
    for (int i = 0; i < 6; ++i) s.x0[i] = 3.0 + 0.3 * (i % 2);
    s.known_f_min = 6.0 * std::log(2.0);
    s.factory = [] { return make_logcosh(6); };
    specs.push_back(std::move(s));
  }
  {
    ProblemSpec s;
    s.name = "double_well4";
    s.dim = 4;
    s.x0 = Vector(4);
    s.x0 << 0.040, 0.050, 0.045, 0.055;  // close to the concave hump
    s.known_f_min = -0.04;
    s.factory = [] { return make_double_well(4, 25.0); };
    specs.push_back(std::move(s));
  }
  return specs;
}

}  // namespace

const std::vector<ProblemSpec>& registry() {
  static const std::vector<ProblemSpec> specs = build_registry();
  return specs;
}

const ProblemSpec& find_problem(const std::string& name) {
  for (const ProblemSpec& s : registry()) {
    if (s.name == name) return s;
  }
  throw std::invalid_argument("unknown problem: " + name);
}

double fd_check_gradient(const Problem& problem, const Vector& x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("fd_check_gradient: h must be positive");
  const Vector g = problem.eval_grad(x);
  double worst = 0.0;
  Vector xp = x, xm = x;
  for (int i = 0; i < problem.dim; ++i) {
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    const double fd = (problem.eval_f(xp) - problem.eval_f(xm)) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - g[i]) / std::max(1.0, std::abs(g[i])));
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return worst;
}

double fd_check_hvp(const Problem& problem, const Vector& x, const Vector& v, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("fd_check_hvp: h must be positive");
  if (std::abs(v.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument("fd_check_hvp: v must be a unit vector");
  }
  const Vector hv = problem.eval_hvp(x, v);
  const Vector fd = (problem.eval_grad(x + h * v) - problem.eval_grad(x - h * v)) / (2.0 * h);
  const double denom = std::max(1.0, hv.lpNorm<Eigen::Infinity>());
  return (fd - hv).lpNorm<Eigen::Infinity>() / denom;
}

}  // namespace irnopt
