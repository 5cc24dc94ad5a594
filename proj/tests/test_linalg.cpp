#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <doctest.h>
#include <Eigen/Dense>

#include "irnopt/linalg.hpp"

using irnopt::EvalCounters;
using irnopt::KrylovWorkspace;
using irnopt::SecularResult;
using irnopt::Tridiag;
using irnopt::Vector;

namespace {

Eigen::MatrixXd dense_of(const Tridiag& T) {
  const int m = T.dim();
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    D(i, i) = T.diag[i];
    if (i + 1 < m) D(i, i + 1) = D(i + 1, i) = T.offdiag[i];
  }
  return D;
}

irnopt::HvpFn hvp_of(const Eigen::MatrixXd& H) {
  return [H](const Vector& v) { return Vector(H * v); };
}

Tridiag random_tridiag(std::mt19937& rng, int m) {
  std::uniform_real_distribution<double> dval(-2.0, 2.0);
  std::uniform_real_distribution<double> oval(-1.5, 1.5);
  Tridiag T;
  T.diag.resize(m);
  T.offdiag.resize(m - 1);
  for (int i = 0; i < m; ++i) T.diag[i] = dval(rng);
  for (int i = 0; i + 1 < m; ++i) T.offdiag[i] = oval(rng);
  return T;
}

Eigen::MatrixXd random_symmetric(std::mt19937& rng, int n, double scale) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = u(rng);
  return scale * 0.5 * (A + A.transpose());
}

}  // namespace

TEST_CASE("lanczos_init starts from the normalized gradient") {
  SUBCASE("eigenvector start breaks down immediately") {
    Vector g(2);
    g << 3, 0;
    KrylovWorkspace ws = irnopt::lanczos_init(g, [](const Vector& v) { return v; });
    CHECK(ws.m() == 1);
    CHECK(ws.basis[0][0] == doctest::Approx(1.0));
    CHECK(ws.basis[0][1] == doctest::Approx(0.0));
    CHECK(ws.alpha[0] == doctest::Approx(1.0));
    CHECK(ws.gamma == doctest::Approx(3.0));
    CHECK(ws.breakdown);
    CHECK_THROWS_AS(irnopt::lanczos_expand(ws, [](const Vector& v) { return v; }),
                    std::logic_error);
  }

  SUBCASE("diag(1,2,3) from the all-ones direction") {
    Eigen::MatrixXd H = Eigen::Vector3d(1, 2, 3).asDiagonal();
    Vector g = Vector::Ones(3);
    KrylovWorkspace ws = irnopt::lanczos_init(g, hvp_of(H));
    CHECK(ws.alpha[0] == doctest::Approx(2.0).epsilon(1e-13));  // (1+2+3)/3
    CHECK_FALSE(ws.breakdown);
  }

  SUBCASE("zero gradient is rejected") {
    CHECK_THROWS_AS(irnopt::lanczos_init(Vector::Zero(3), [](const Vector& v) { return v; }),
                    std::invalid_argument);
  }
}

TEST_CASE("lanczos_expand recovers the full spectrum of diag(1,2,3)") {
  Eigen::MatrixXd H = Eigen::Vector3d(1, 2, 3).asDiagonal();
  Vector g = Vector::Ones(3);
  KrylovWorkspace ws = irnopt::lanczos_init(g, hvp_of(H));
  irnopt::lanczos_expand(ws, hvp_of(H));
  irnopt::lanczos_expand(ws, hvp_of(H));
  CHECK(ws.m() == 3);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_of(ws.tridiag()));
  CHECK(es.eigenvalues()[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(es.eigenvalues()[1] == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(es.eigenvalues()[2] == doctest::Approx(3.0).epsilon(1e-10));

  CHECK_THROWS_AS(irnopt::lanczos_expand(ws, hvp_of(H)), std::logic_error);
}

TEST_CASE("lanczos basis stays orthonormal and similar to the tridiagonal") {
  std::mt19937 rng(7101);
  std::uniform_int_distribution<int> dims(5, 50);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = dims(rng);
    const Eigen::MatrixXd H = random_symmetric(rng, n, 3.0);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vector g(n);
    for (int i = 0; i < n; ++i) g[i] = u(rng);

    KrylovWorkspace ws = irnopt::lanczos_init(g, hvp_of(H));
    while (!ws.breakdown && ws.m() < n) irnopt::lanczos_expand(ws, hvp_of(H));

    const int m = ws.m();
    Eigen::MatrixXd R(n, m);
    for (int j = 0; j < m; ++j) R.col(j) = ws.basis[j];

    const Eigen::MatrixXd gram = R.transpose() * R - Eigen::MatrixXd::Identity(m, m);
    CHECK(gram.cwiseAbs().maxCoeff() <= 1e-10);

    const Eigen::MatrixXd Tm = dense_of(ws.tridiag());
    const Eigen::MatrixXd sim = R.transpose() * H * R - Tm;
    CHECK(sim.cwiseAbs().maxCoeff() <= 1e-8 * (1.0 + ws.tridiag().inf_norm()));

    // reduced gradient is gamma * e1 by construction
    const Vector rg = R.transpose() * g;
    CHECK(rg[0] == doctest::Approx(g.norm()).epsilon(1e-12));
    for (int j = 1; j < m; ++j) CHECK(std::abs(rg[j]) <= 1e-10 * g.norm());
  }
}

TEST_CASE("tridiag_smallest_eig agrees with closed forms and the dense oracle") {
  CHECK(irnopt::tridiag_smallest_eig({{5.0}, {}}) == doctest::Approx(5.0));
  CHECK(irnopt::tridiag_smallest_eig({{2.0, 2.0}, {1.0}}) == doctest::Approx(1.0));
  CHECK(irnopt::tridiag_smallest_eig({{0.0, 0.0, 0.0}, {1.0, 1.0}}) ==
        doctest::Approx(-std::sqrt(2.0)).epsilon(1e-12));

  std::mt19937 rng(40923);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 12);
    const Tridiag T = random_tridiag(rng, m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_of(T));
    const double tol = 1e-12 * std::max(1.0, T.inf_norm());
    CHECK(std::abs(irnopt::tridiag_smallest_eig(T) - es.eigenvalues()[0]) <= 4.0 * tol);
    CHECK(std::abs(irnopt::tridiag_largest_eig(T) - es.eigenvalues()[m - 1]) <= 4.0 * tol);
  }
}

TEST_CASE("solve_shifted_tridiag solves and counts factorizations") {
  EvalCounters counters;
  SUBCASE("1x1") {
    Vector rhs(1);
    rhs << 2;
    const auto x = irnopt::solve_shifted_tridiag({{1.0}, {}}, 0.0, rhs, &counters);
    REQUIRE(x.has_value());
    CHECK((*x)[0] == doctest::Approx(2.0));
    CHECK(counters.tridiag_factorizations == 1);
  }
  SUBCASE("diagonal with shift") {
    Vector rhs(2);
    rhs << 2, 8;
    const auto x = irnopt::solve_shifted_tridiag({{1.0, 3.0}, {0.0}}, 1.0, rhs, &counters);
    REQUIRE(x.has_value());
    CHECK((*x)[0] == doctest::Approx(1.0));
    CHECK((*x)[1] == doctest::Approx(2.0));
  }
  SUBCASE("indefinite shift reports a nonpositive pivot") {
    Vector rhs(1);
    rhs << 1;
    CHECK_FALSE(irnopt::solve_shifted_tridiag({{-1.0}, {}}, 0.0, rhs, &counters).has_value());
  }
  SUBCASE("random SPD residual check") {
    std::mt19937 rng(555);
    for (int trial = 0; trial < 20; ++trial) {
      Tridiag T = random_tridiag(rng, 5);
      const double shift = -irnopt::tridiag_smallest_eig(T) + 1.0;
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      Vector rhs(5);
      for (int i = 0; i < 5; ++i) rhs[i] = u(rng);
      const auto x = irnopt::solve_shifted_tridiag(T, shift, rhs, &counters);
      REQUIRE(x.has_value());
      const Vector resid =
          (dense_of(T) + shift * Eigen::MatrixXd::Identity(5, 5)) * (*x) - rhs;
      CHECK(resid.norm() <= 1e-12 * std::max(1.0, rhs.norm()));
    }
  }
}

TEST_CASE("secular_root on 1x1 instances matches the polynomial roots") {
  SUBCASE("positive curvature") {
    // stationarity of v + v^2/2 + |v|^3/2: 1.5 t^2 + t - 1 = 0
    const SecularResult res = irnopt::secular_root({{1.0}, {}}, 1.0, 1.0);
    const double t = (std::sqrt(7.0) - 1.0) / 3.0;
    CHECK(res.v.norm() == doctest::Approx(t).epsilon(1e-10));
    CHECK(res.v[0] == doctest::Approx(-t).epsilon(1e-10));
    CHECK(res.lam == doctest::Approx(t).epsilon(1e-10));
    CHECK(res.shift == doctest::Approx(1.5 * t).epsilon(1e-10));
  }
  SUBCASE("negative curvature") {
    // 1.5 t^2 - t - 1 = 0
    const SecularResult res = irnopt::secular_root({{-1.0}, {}}, 1.0, 1.0);
    const double t = (1.0 + std::sqrt(7.0)) / 3.0;
    CHECK(res.v.norm() == doctest::Approx(t).epsilon(1e-10));
    CHECK(res.lam == doctest::Approx(1.215250).epsilon(1e-5));
    CHECK(res.shift >= 1.0);  // -xi(T)
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(irnopt::secular_root({{1.0}, {}}, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(irnopt::secular_root({{1.0}, {}}, 1.0, 0.0), std::invalid_argument);
  }
}

TEST_CASE("secular_root satisfies the reduced optimality system on random instances") {
  std::mt19937 rng(20240521);
  std::uniform_real_distribution<double> gdist(0.2, 5.0);
  std::uniform_real_distribution<double> sdist(0.05, 4.0);
  for (int trial = 0; trial < 60; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 8);
    const Tridiag T = random_tridiag(rng, m);
    const double gamma = gdist(rng);
    const double sigma = sdist(rng);
    EvalCounters counters;
    const SecularResult res = irnopt::secular_root(T, gamma, sigma, &counters);
    REQUIRE(counters.tridiag_factorizations >= 1);

    const double vnorm = res.v.norm();
    CHECK(std::abs(res.lam - sigma * vnorm) <= 1e-10 * std::max(1.0, res.lam));
    CHECK(res.shift >= std::max(0.0, -res.xi_min) - 1e-9 * std::max(1.0, std::abs(res.xi_min)));

    const Eigen::MatrixXd D = dense_of(T);
    const double quad = res.v.dot(D * res.v);
    const double scale =
        std::max(1.0, std::abs(gamma * res.v[0]) + std::abs(quad) +
                          1.5 * sigma * vnorm * vnorm * vnorm);
    // stationarity, curvature, and shifted positive semidefiniteness
    CHECK(std::abs(gamma * res.v[0] + quad + 1.5 * sigma * vnorm * vnorm * vnorm) <=
          1e-8 * scale);
    CHECK(quad + 1.5 * sigma * vnorm * vnorm * vnorm >= -1e-8 * scale);
    CHECK(res.xi_min + 1.5 * sigma * vnorm >= -1e-8 * std::max(1.0, T.inf_norm()));
  }
}

TEST_CASE("the secular function sigma_eff ||v(mu)|| - mu is strictly decreasing") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = 2 + static_cast<int>(rng() % 6);
    const Tridiag T = random_tridiag(rng, m);
    const double sigma = 0.7;
    const double lo = std::max(0.0, -irnopt::tridiag_smallest_eig(T));
    Vector rhs = Vector::Zero(m);
    rhs[0] = 1.3;
    double prev = std::numeric_limits<double>::infinity();
    for (double offset : {0.05, 0.2, 0.8, 2.0, 6.0, 20.0}) {
      const double mu = lo + offset;
      const auto v = irnopt::solve_shifted_tridiag(T, mu, rhs, nullptr);
      REQUIRE(v.has_value());
      const double phi = 1.5 * sigma * v->norm() - mu;
      CHECK(phi < prev);
      prev = phi;
    }
  }
}

TEST_CASE("solve_shifted_tridiag does not mutate its input") {
  const Tridiag T{{1.0, 2.0, 3.0}, {0.5, -0.25}};
  const Tridiag copy = T;
  Vector rhs(3);
  rhs << 1, 2, 3;
  (void)irnopt::solve_shifted_tridiag(T, 0.5, rhs, nullptr);
  CHECK(T.diag == copy.diag);
  CHECK(T.offdiag == copy.offdiag);
}
