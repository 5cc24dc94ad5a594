#ifndef IRNOPT_PROBLEMS_HPP
#define IRNOPT_PROBLEMS_HPP

#include <optional>
#include <string>
#include <vector>

#include "irnopt/core.hpp"

namespace irnopt {

/// A named test problem: standard start, known minimum when one
/// exists, and a factory producing the matrix-free oracle.
struct ProblemSpec {
  std::string name;
  int dim = 0;
  Vector x0;
  std::optional<double> known_f_min{};
  bool convex_quadratic = false;
  std::function<Problem()> factory;
};

/// Built-in suite.  Order is fixed; lookups go through find_problem.
const std::vector<ProblemSpec>& registry();

/// Throws std::invalid_argument for unknown names.
const ProblemSpec& find_problem(const std::string& name);

/// Max over coordinates of |central difference - analytic| /
/// max(1, |analytic|).  Requires h > 0.
double fd_check_gradient(const Problem& problem, const Vector& x, double h);

/// Relative error of hvp(x, v) against the central difference of the
/// gradient along the unit vector v.  Requires ||v|| = 1 and h > 0.
double fd_check_hvp(const Problem& problem, const Vector& x, const Vector& v, double h);

}  // namespace irnopt

#endif  // IRNOPT_PROBLEMS_HPP
