#include "lagflow/domain.hpp"

namespace lagflow {

namespace {

void require_spd(const Eigen::Matrix2d& m, const char* what) {
  if (std::abs(m(0, 1) - m(1, 0)) > 1e-13 * (1.0 + m.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument(std::string(what) + ": matrix must be symmetric");
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw std::invalid_argument(std::string(what) + ": matrix must be positive definite");
  }
}

// Arclength mean of |Dh| over the ellipse boundary for unit scale,
// trapezoid rule on the periodic parametrization (exact for a circle).
double boundary_mean_grad(const Eigen::Matrix2d& M) {
  const int n = 4096;
  double num = 0.0, den = 0.0;
  for (int k = 0; k < n; ++k) {
    const double phi = 2.0 * M_PI * k / n;
    const Eigen::Vector2d e(std::cos(phi), std::sin(phi));
    const double q = e.dot(M * e);
    const double rho = 1.0 / std::sqrt(q);
    const double dq = e.x() * e.y() * 2.0 * (M(1, 1) - M(0, 0)) +
                      2.0 * M(0, 1) * (e.x() * e.x() - e.y() * e.y());
    const double drho = -dq / (2.0 * q * std::sqrt(q));
    // |x_phi| for x = rho(phi) e(phi)
    const double w = std::sqrt(drho * drho + rho * rho);
    const Eigen::Vector2d p = rho * e;
    num += 2.0 * (M * p).norm() * w;
    den += w;
  }
  return num / den;
}

}  // namespace

BoundaryPoint ConvexDomain::boundary_point(double param) const {
  BoundaryPoint bp;
  bp.param = param;
  if (dim_ == 1) {
    const bool left = param < 0.5;
    bp.position = {left ? a_ : b_, 0.0};
    bp.normal = {left ? 1.0 : -1.0, 0.0};
    return bp;
  }
  bp.position = center_ + rho(param) * Eigen::Vector2d(std::cos(param), std::sin(param));
  bp.normal = grad_h(bp.position).normalized();
  return bp;
}

ConvexDomain ConvexDomain::interval(double a, double b) {
  if (!(a < b)) throw std::invalid_argument("interval: requires a < b");
  ConvexDomain d;
  d.kind_ = DomainKind::Interval;
  d.dim_ = 1;
  d.a_ = a;
  d.b_ = b;
  d.theta_ = 2.0 / (b - a);
  return d;
}

ConvexDomain ConvexDomain::disc(double radius, const Eigen::Vector2d& center) {
  if (!(radius > 0.0)) throw std::invalid_argument("disc: requires radius > 0");
  ConvexDomain d;
  d.kind_ = DomainKind::Disc;
  d.dim_ = 2;
  d.center_ = center;
  d.shape_ = Eigen::Matrix2d::Identity() / (radius * radius);
  d.scale_ = radius / 2.0;
  d.theta_ = 1.0 / radius;
  return d;
}

ConvexDomain ConvexDomain::ellipse(const Eigen::Matrix2d& shape, const Eigen::Vector2d& center) {
  require_spd(shape, "ellipse");
  // A shape matrix proportional to the identity is a disc; use the exact
  // closed-form normalization in that case.
  if (std::abs(shape(0, 1)) < 1e-14 * shape.norm() &&
      std::abs(shape(0, 0) - shape(1, 1)) < 1e-14 * shape.norm()) {
    return disc(1.0 / std::sqrt(shape(0, 0)), center);
  }
  ConvexDomain d;
  d.kind_ = DomainKind::Ellipse;
  d.dim_ = 2;
  d.center_ = center;
  d.shape_ = 0.5 * (shape + shape.transpose());
  d.scale_ = 1.0 / boundary_mean_grad(d.shape_);
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(d.shape_);
  d.theta_ = 2.0 * d.scale_ * es.eigenvalues().minCoeff();
  return d;
}

ConvexDomain pushforward_quadratic(const ConvexDomain& omega, const Eigen::Matrix2d& A,
                                   const Eigen::Vector2d& b, const Eigen::Vector2d& xc) {
  if (omega.dim() == 1) {
    if (!(A(0, 0) > 0.0)) throw std::invalid_argument("pushforward: 1D map must have A > 0");
    const double ya = A(0, 0) * (omega.interval_a() - xc.x()) + b.x();
    const double yb = A(0, 0) * (omega.interval_b() - xc.x()) + b.x();
    return ConvexDomain::interval(std::min(ya, yb), std::max(ya, yb));
  }
  require_spd(A, "pushforward");
  const Eigen::Matrix2d Ainv = A.inverse();
  const Eigen::Matrix2d M = Ainv * omega.shape_matrix() * Ainv;
  const Eigen::Vector2d c = A * (omega.center() - xc) + b;
  return ConvexDomain::ellipse(0.5 * (M + M.transpose()), c);
}

}  // namespace lagflow
