#include <doctest.h>

#include <random>

#include "lagflow/legendre.hpp"

using namespace lagflow;

TEST_CASE("quadratic conjugacy is exact") {
  SUBCASE("self-dual paraboloid") {
    const auto g = Grid::make_2d(ConvexDomain::disc(1.0), 12, 24);
    const Field u = Field::sample(g, [](const Eigen::Vector2d& x) { return 0.5 * x.squaredNorm(); });
    const auto dg = Grid::make_2d(ConvexDomain::disc(1.0), 12, 24);
    const DualField dual = legendre_transform(u, dg);
    double worst = 0.0;
    for (int j = 0; j < dg->ns(); ++j)
      for (int k = 0; k < dg->nphi(); ++k) {
        const Eigen::Vector2d y(dg->X()(k, j), dg->Y()(k, j));
        worst = std::max(worst, std::abs(dual.field.v(k, j) - 0.5 * y.squaredNorm()));
      }
    CHECK(worst < 1e-10);
  }
  SUBCASE("1D: conjugate of x^2 is y^2/4") {
    const auto g = Grid::make_1d(ConvexDomain::interval(-1.0, 1.0), 40);
    const Field u = Field::sample(g, [](const Eigen::Vector2d& x) { return x.x() * x.x(); });
    const auto dg = Grid::make_1d(ConvexDomain::interval(-2.0, 2.0), 40);
    const DualField dual = legendre_transform(u, dg);
    double worst = 0.0;
    for (int j = 0; j <= dg->n1(); ++j) {
      const double y = dg->x1()(j);
      worst = std::max(worst, std::abs(dual.field.v(j, 0) - 0.25 * y * y));
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("anisotropic quadratic conjugate against a brute-force oracle") {
  const auto g = Grid::make_2d(ConvexDomain::disc(1.0), 16, 32);
  Eigen::Matrix2d a = Eigen::Vector2d(2.0, 1.0).asDiagonal();
  const Field u =
      Field::sample(g, [&](const Eigen::Vector2d& x) { return 0.5 * x.dot(a * x); });
  const JetField jet = differentiate(u);

  // oracle: dense maximization of <x,y> - u(x) over a fine sample of the disc
  auto oracle = [&](const Eigen::Vector2d& y) {
    double best = -1e300;
    const int m = 600;
    for (int i = 0; i <= m; ++i) {
      for (int j = 0; j <= m; ++j) {
        const Eigen::Vector2d x(-1.0 + 2.0 * i / m, -1.0 + 2.0 * j / m);
        if (x.squaredNorm() > 1.0) continue;
        best = std::max(best, x.dot(y) - 0.5 * x.dot(a * x));
      }
    }
    return best;
  };

  const Eigen::Vector2d samples[3] = {{0.5, 0.2}, {-0.8, 0.1}, {0.3, -0.6}};
  const auto dg = Grid::make_2d(
      ConvexDomain::ellipse(Eigen::Vector2d(0.25, 1.0).asDiagonal()), 16, 32);
  const DualField dual = legendre_transform(u, jet, dg);
  for (const auto& y : samples) {
    // closed form 1/2 y^T A^{-1} y, checked against the oracle first
    const double cf = 0.25 * y.x() * y.x() + 0.5 * y.y() * y.y();
    CHECK(std::abs(oracle(y) - cf) < 2e-3);  // oracle is grid-limited
    double js, kf;
    REQUIRE(dg->locate(y, js, kf));
    Eigen::ArrayXXd vals = dual.field.v.array();
    CHECK(std::abs(dg->interpolate(vals, js, kf) - cf) < 5e-3);  // bilinear tolerance
  }
  // exactness at the dual nodes themselves
  double worst = 0.0;
  for (int j = 0; j < dg->ns(); ++j)
    for (int k = 0; k < dg->nphi(); ++k) {
      const Eigen::Vector2d y(dg->X()(k, j), dg->Y()(k, j));
      const double cf = 0.25 * y.x() * y.x() + 0.5 * y.y() * y.y();
      worst = std::max(worst, std::abs(dual.field.v(k, j) - cf));
    }
  CHECK(worst < 1e-10);
}

TEST_CASE("hessian inverse duality on quadratics") {
  const auto g = Grid::make_2d(ConvexDomain::disc(1.0), 16, 32);
  Eigen::Matrix2d a = Eigen::Vector2d(2.0, 1.0).asDiagonal();
  const Field u = Field::sample(g, [&](const Eigen::Vector2d& x) { return 0.5 * x.dot(a * x); });
  const auto dg = Grid::make_2d(
      ConvexDomain::ellipse(Eigen::Vector2d(0.25, 1.0).asDiagonal()), 16, 32);
  const DualField dual = legendre_transform(u, dg);
  const HessianInverseReport rep = hessian_inverse_check(u, dual);
  CHECK(rep.sampled > 0);
  CHECK(rep.max_discrepancy < 1e-6);
}

TEST_CASE("dual evolution law on the closed-form drifting paraboloid") {
  // u(x,t) = |x|^2/2 + t * pi/2 has u* = |y|^2/2 - t * pi/2, and
  // du*/dt - F(D^2u*) = -pi (n = 2)
  const auto g = Grid::make_2d(ConvexDomain::disc(1.0), 12, 24);
  const auto dg = Grid::make_2d(ConvexDomain::disc(1.0), 12, 24);
  auto slice = [&](double t) {
    Field f = Field::sample(
        g, [&](const Eigen::Vector2d& x) { return 0.5 * x.squaredNorm() + t * M_PI / 2.0; }, t);
    return f;
  };
  const DualField a = legendre_transform(slice(0.0), dg);
  const DualField b = legendre_transform(slice(0.1), dg);
  CHECK(a.field.v(0, 0) - b.field.v(0, 0) == doctest::Approx(0.1 * M_PI / 2.0).epsilon(1e-10));
  const DualFlowReport rep = dual_flow_residual(a, b);
  CHECK(rep.max_residual < 1e-8);
  // the underlying identity at lambda = 1
  CHECK(std::atan(1.0) + std::atan(1.0) == doctest::Approx(M_PI / 2.0));
}

TEST_CASE("involution reproduces a smooth strictly convex field") {
  const auto g = Grid::make_2d(ConvexDomain::disc(1.0), 16, 32);
  const Field u = Field::sample(g, [](const Eigen::Vector2d& x) {
    return 0.5 * x.squaredNorm() + 0.05 * std::exp(0.5 * x.x() + 0.3 * x.y());
  });
  // gradient image: Du = x + small; use a slightly padded dual disc
  const auto dg = Grid::make_2d(ConvexDomain::disc(1.15, {0.03, 0.02}), 24, 48);
  const DualField dual = legendre_transform(u, dg);
  const JetField djet = differentiate(dual.field);
  CHECK(djet.lam1.minCoeff() > 0.0);  // dual convexity away from the rim
  const DualField back = legendre_transform(dual.field, g);
  const double tol = 5.0 * (1.0 / 16.0) * (1.0 / 16.0);
  double worst = 0.0;
  for (int j = 0; j < g->ns() - 1; ++j)
    for (int k = 0; k < g->nphi(); ++k) {
      worst = std::max(worst, std::abs(back.field.v(k, j) - u.v(k, j)));
    }
  CHECK(worst < tol);
}

TEST_CASE("legendre transform rejects non-convex data") {
  const auto g = Grid::make_1d(ConvexDomain::interval(-1.0, 1.0), 16);
  const Field u = Field::sample(g, [](const Eigen::Vector2d& x) { return -x.x() * x.x(); });
  const auto dg = Grid::make_1d(ConvexDomain::interval(-1.0, 1.0), 16);
  CHECK_THROWS_AS(legendre_transform(u, dg), std::invalid_argument);
}
