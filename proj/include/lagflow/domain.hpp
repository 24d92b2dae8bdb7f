#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace lagflow {

enum class DomainKind { Interval, Disc, Ellipse };

/// Point on the boundary together with the inner unit normal.
/// In 1D `param` is an endpoint tag (0 = left, 1 = right); in 2D it is the
/// polar angle of the boundary parametrization.
struct BoundaryPoint {
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
  Eigen::Vector2d normal = Eigen::Vector2d::Zero();
  double param = 0.0;
};

/// Strictly convex domain with a smooth strictly concave defining function
/// h (h > 0 inside, h = 0 on the boundary, D2h <= -theta I).
///
/// Supported realizations:
///   interval (a,b):      h(p) = (b-p)(p-a)/(b-a)
///   disc R about y0:     h(p) = (R^2 - |p-y0|^2) / (2R)
///   ellipse {q(p)<=1}:   h(p) = s (1 - (p-c)^T M (p-c)),
/// with s chosen so the arclength mean of |Dh| over the boundary equals 1
/// (exactly s = R/2 for a disc).  1D points use component 0 of Vector2d.
class ConvexDomain {
 public:
  DomainKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double theta() const { return theta_; }
  double scale() const { return scale_; }

  double interval_a() const { return a_; }
  double interval_b() const { return b_; }
  const Eigen::Vector2d& center() const { return center_; }
  const Eigen::Matrix2d& shape_matrix() const { return shape_; }

  // -- defining function -----------------------------------------------

  double h(const Eigen::Vector2d& p) const {
    if (dim_ == 1) {
      const double x = p.x();
      return (b_ - x) * (x - a_) / (b_ - a_);
    }
    const Eigen::Vector2d d = p - center_;
    return scale_ * (1.0 - d.dot(shape_ * d));
  }

  Eigen::Vector2d grad_h(const Eigen::Vector2d& p) const {
    if (dim_ == 1) {
      return {(a_ + b_ - 2.0 * p.x()) / (b_ - a_), 0.0};
    }
    return -2.0 * scale_ * (shape_ * (p - center_));
  }

  /// Hessian of h; constant for the quadratic defining functions used here.
  Eigen::Matrix2d hess_h() const {
    if (dim_ == 1) {
      Eigen::Matrix2d out = Eigen::Matrix2d::Zero();
      out(0, 0) = -2.0 / (b_ - a_);
      return out;
    }
    return -2.0 * scale_ * shape_;
  }

  bool contains(const Eigen::Vector2d& p) const { return h(p) >= 0.0; }

  // -- boundary --------------------------------------------------------

  /// Boundary radius about the center in direction phi, with derivatives.
  /// Only meaningful in 2D.
  double rho(double phi) const {
    return 1.0 / std::sqrt(qhat(phi));
  }
  void rho_jet(double phi, double& r, double& dr, double& ddr) const {
    const double q = qhat(phi);
    const double dq = dqhat(phi);
    const double ddq = ddqhat(phi);
    const double q32 = q * std::sqrt(q);
    r = 1.0 / std::sqrt(q);
    dr = -dq / (2.0 * q32);
    ddr = 3.0 * dq * dq / (4.0 * q32 * q) - ddq / (2.0 * q32);
  }

  /// Boundary point and inner unit normal at parameter phi (2D) or
  /// endpoint tag (1D: 0 = left, 1 = right).
  BoundaryPoint boundary_point(double param) const;

  // -- factories -------------------------------------------------------

  static ConvexDomain interval(double a, double b);
  static ConvexDomain disc(double radius, const Eigen::Vector2d& center = Eigen::Vector2d::Zero());
  static ConvexDomain ellipse(const Eigen::Matrix2d& shape,
                              const Eigen::Vector2d& center = Eigen::Vector2d::Zero());

  /// Same zero level set with the defining function rescaled by `factor`
  /// (2D only); boundary-condition roots are scale-invariant.
  ConvexDomain rescaled(double factor) const {
    if (dim_ != 2 || !(factor > 0.0)) {
      throw std::invalid_argument("rescaled: needs a 2D domain and a positive factor");
    }
    ConvexDomain out = *this;
    out.scale_ *= factor;
    out.theta_ *= factor;
    return out;
  }

 private:
  double qhat(double phi) const {
    const double c = std::cos(phi), s = std::sin(phi);
    return shape_(0, 0) * c * c + 2.0 * shape_(0, 1) * c * s + shape_(1, 1) * s * s;
  }
  double dqhat(double phi) const {
    return (shape_(1, 1) - shape_(0, 0)) * std::sin(2.0 * phi) +
           2.0 * shape_(0, 1) * std::cos(2.0 * phi);
  }
  double ddqhat(double phi) const {
    return 2.0 * (shape_(1, 1) - shape_(0, 0)) * std::cos(2.0 * phi) -
           4.0 * shape_(0, 1) * std::sin(2.0 * phi);
  }

  DomainKind kind_ = DomainKind::Interval;
  int dim_ = 1;
  double a_ = 0.0, b_ = 1.0;                            // 1D endpoints
  Eigen::Vector2d center_ = Eigen::Vector2d::Zero();    // 2D center
  Eigen::Matrix2d shape_ = Eigen::Matrix2d::Identity(); // 2D SPD shape matrix
  double scale_ = 0.5;                                  // normalization of h
  double theta_ = 1.0;                                  // concavity constant
};

/// Image of `omega` under the affine map p -> A (p - xc) + b.  A must be SPD.
/// Interval images map endpoints; ellipse/disc images have shape matrix
/// A^{-1} M A^{-1} centered at A (c - xc) + b.
ConvexDomain pushforward_quadratic(const ConvexDomain& omega, const Eigen::Matrix2d& A,
                                   const Eigen::Vector2d& b, const Eigen::Vector2d& xc);

}  // namespace lagflow
