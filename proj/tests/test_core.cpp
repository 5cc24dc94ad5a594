#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "irnopt/core.hpp"

using irnopt::check_second_order;
using irnopt::check_step_conditions;
using irnopt::ConditionReport;
using irnopt::SolverConfig;
using irnopt::StepCandidate;
using irnopt::Vector;

namespace {

Vector vec(std::initializer_list<double> vals) {
  Vector v(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double x : vals) v[i++] = x;
  return v;
}

StepCandidate make_candidate(const Vector& g, const Vector& s, const Vector& hs, double lambda) {
  StepCandidate cand;
  cand.s = s;
  cand.lambda = lambda;
  cand.hs = hs;
  cand.model_decrease = -(g.dot(s) + 0.5 * s.dot(hs));
  cand.residual = g + hs + lambda * s;
  return cand;
}

}  // namespace

TEST_CASE("quadratic_model evaluates f + g's + s'hs/2") {
  CHECK(irnopt::quadratic_model(0.5, vec({1, 0}), vec({-1, 0}), vec({-1, 0})) == doctest::Approx(0.0));
  CHECK(irnopt::quadratic_model(3.0, vec({0, 0}), vec({7, -2}), vec({0, 0})) == doctest::Approx(3.0));
  // cross-checked by hand: g's = -4/3, s'hs/2 = 2/3
  CHECK(irnopt::quadratic_model(0.0, vec({1, 1}), vec({-1, -1.0 / 3.0}), vec({-1, -1})) ==
        doctest::Approx(-2.0 / 3.0).epsilon(1e-14));
  CHECK_THROWS_AS(irnopt::quadratic_model(0.0, vec({1, 1}), vec({1}), vec({1, 1})),
                  std::invalid_argument);
}

TEST_CASE("cubic_model adds the sigma regularization term") {
  const Vector g = vec({1, 2});
  const Vector s = vec({-0.3, 0.4});
  const Vector hs = vec({0.1, -0.2});
  CHECK(irnopt::cubic_model(1.0, g, s, hs, 0.0) ==
        doctest::Approx(irnopt::quadratic_model(1.0, g, s, hs)));
  CHECK(irnopt::cubic_model(0.0, vec({1}), vec({-1}), vec({-1}), 1.0) == doctest::Approx(0.0));

  // 1D stationary point of v + v^2/2 with weight ||v||^3/2
  const double t = (std::sqrt(7.0) - 1.0) / 3.0;
  CHECK(irnopt::cubic_model(0.0, vec({1}), vec({-t}), vec({t}), 1.0) < 0.0);
}

TEST_CASE("acceptance_ratio basics") {
  CHECK(irnopt::acceptance_ratio(0.5, 0.0, 1.0) == doctest::Approx(0.5));
  CHECK(irnopt::acceptance_ratio(1.0, 1.0, 2.0) == doctest::Approx(0.0));
  CHECK(irnopt::acceptance_ratio(0.0, 1.0, 1.0) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(irnopt::acceptance_ratio(1.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("acceptance_ratio is invariant under shifting f by a constant") {
  for (double shift : {-7.5, 0.0, 3.25, 1e6}) {
    CHECK(irnopt::acceptance_ratio(2.0 + shift, 1.25 + shift, 0.7) ==
          doctest::Approx(irnopt::acceptance_ratio(2.0, 1.25, 0.7)).epsilon(1e-9));
  }
}

TEST_CASE("delta_k branches") {
  CHECK(irnopt::delta_k(5.0, 2.0, 0.0) == doctest::Approx(2.0));
  CHECK(irnopt::delta_k(6.0, 1.0, 1.0) == doctest::Approx(1.0));
  CHECK(irnopt::delta_k(1.0, 1.0, 4.0) == doctest::Approx(1.0 / (2.0 * std::sqrt(6.0))));
  CHECK_THROWS_AS(irnopt::delta_k(1.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("delta_k stays finite and positive across the branch boundary") {
  const double gnorm = 2.0, snorm = 0.5;
  CHECK(irnopt::delta_k(gnorm, snorm, 0.0) > 0.0);
  for (double sigma = 1e-2; sigma >= 1e-12; sigma *= 1e-2) {
    const double d = irnopt::delta_k(gnorm, snorm, sigma * snorm);
    CHECK(std::isfinite(d));
    CHECK(d > 0.0);
  }
}

TEST_CASE("check_step_conditions on the 1D convex quadratic") {
  SolverConfig cfg;
  const Vector g = vec({1});

  SUBCASE("exact Newton step passes all three") {
    const auto cand = make_candidate(g, vec({-1}), vec({-1}), 0.0);
    const ConditionReport rep = check_step_conditions(0.5, g, cand, 1.0, cfg);
    CHECK(rep.c_a);
    CHECK(rep.c_b);
    CHECK(rep.c_c);
    CHECK(rep.all());
  }

  SUBCASE("ascent step fails the decrease condition") {
    const auto cand = make_candidate(g, vec({1}), vec({1}), 0.0);
    const ConditionReport rep = check_step_conditions(0.5, g, cand, 1.0, cfg);
    CHECK_FALSE(rep.c_a);
  }

  SUBCASE("zero step is degenerate") {
    const auto cand = make_candidate(g, vec({0}), vec({0}), 0.0);
    const ConditionReport rep = check_step_conditions(0.5, g, cand, 1.0, cfg);
    CHECK(rep.degenerate);
    CHECK_FALSE(rep.all());
  }
}

TEST_CASE("check_step_conditions accepts the exact 1D cubic solution with negative curvature") {
  // g = 1, H = -1, sigma = 1: minimizer s = -(1+sqrt(7))/3, lambda = |s|
  SolverConfig cfg;
  const double t = (1.0 + std::sqrt(7.0)) / 3.0;
  const Vector g = vec({1});
  const auto cand = make_candidate(g, vec({-t}), vec({t}), t);
  const ConditionReport rep = check_step_conditions(0.0, g, cand, 1.0, cfg);
  CHECK(rep.c_a);
  CHECK(rep.c_b);
  CHECK(rep.c_c);
}

TEST_CASE("check_step_conditions is a pure function") {
  SolverConfig cfg;
  const Vector g = vec({2, -1});
  const auto cand = make_candidate(g, vec({-0.5, 0.25}), vec({-0.9, 0.4}), 0.3);
  const ConditionReport a = check_step_conditions(1.0, g, cand, 2.0, cfg);
  const ConditionReport b = check_step_conditions(1.0, g, cand, 2.0, cfg);
  CHECK(a.c_a == b.c_a);
  CHECK(a.c_b == b.c_b);
  CHECK(a.c_c == b.c_c);
  CHECK(a.degenerate == b.degenerate);
}

TEST_CASE("check_second_order") {
  CHECK(check_second_order(0.3, 12.0, 1.5));
  CHECK(check_second_order(-1.0, 1.0, 1.5));
  CHECK_FALSE(check_second_order(-1.0, 0.1, 1.5));
}

TEST_CASE("SolverConfig validation rejects broken orderings") {
  SolverConfig good;
  CHECK_NOTHROW(good.validate());

  SolverConfig bad = good;
  bad.eta = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = good;
  bad.eta1 = 0.5;
  bad.eta2 = 0.1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = good;
  bad.gammaL = 0.9;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = good;
  bad.sigma_min = 2.0;
  bad.sigma_max = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = good;
  bad.kappa3 = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = good;
  bad.cg_residual_safety = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
