#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "lagflow/domain.hpp"

namespace lagflow {

/// Boundary-fitted structured grid.
///
/// 1D: uniform nodes x_j = a + j*delta, j = 0..n, one ghost node past each
/// endpoint.
///
/// 2D: polar-fitted cell-centered nodes x(s_j, phi_k) = center +
/// s_j * rho(phi_k) * e(phi_k) with s_j = (j+1/2)*ds, j = 0..ns-1 and
/// phi_k = k*dphi.  Values are stored as (nphi x ns) matrices, one column
/// per ring.  The radial neighbor below ring 0 is the across-pole node
/// (0, k + nphi/2); the neighbor above ring ns-1 is a ghost ring at
/// s = 1 + ds/2.  Azimuthal derivatives are trigonometric-interpolation
/// derivatives (dense spectral matrices), so any field band-limited in phi
/// is differentiated exactly; radial derivatives are central differences,
/// exact for fields quadratic in s along each diameter.
///
/// Rings near the pole carry an azimuthal mode cap max(2, 2j+1): modes the
/// ring cannot advance stably are projected out by the flow stepper.  The
/// cap never touches modes |m| <= 2, so affine and quadratic potentials
/// are represented and differentiated exactly.  The stability spacing
/// `cfl_spacing` accounts for the capped azimuthal resolution.
class Grid {
 public:
  static constexpr int kMin1D = 8;
  static constexpr int kMinRadial = 8;
  static constexpr int kMinAngular = 16;

  static std::shared_ptr<const Grid> make_1d(const ConvexDomain& domain, int n);
  static std::shared_ptr<const Grid> make_2d(const ConvexDomain& domain, int ns, int nphi);

  int dim() const { return dim_; }
  const ConvexDomain& domain() const { return domain_; }
  int node_count() const { return dim_ == 1 ? n1_ + 1 : ns_ * nphi_; }

  // 1D accessors
  int n1() const { return n1_; }
  double delta() const { return delta_; }
  const Eigen::ArrayXd& x1() const { return x1_; }
  double ghost_x(bool right) const { return right ? x1_(n1_) + delta_ : x1_(0) - delta_; }

  // 2D accessors
  int ns() const { return ns_; }
  int nphi() const { return nphi_; }
  double ds() const { return ds_; }
  double dphi() const { return dphi_; }
  double s(int j) const { return (j + 0.5) * ds_; }
  double phi(int k) const { return k * dphi_; }
  int pole_partner(int k) const { return (k + nphi_ / 2) % nphi_; }

  const Eigen::ArrayXXd& X() const { return X_; }
  const Eigen::ArrayXXd& Y() const { return Y_; }
  const Eigen::ArrayXd& ghost_X() const { return gx_; }
  const Eigen::ArrayXd& ghost_Y() const { return gy_; }

  // Inverse-transpose Jacobian entries per node, Du = J^{-T} (u_s, u_phi).
  const Eigen::ArrayXXd& it11() const { return it11_; }
  const Eigen::ArrayXXd& it12() const { return it12_; }
  const Eigen::ArrayXXd& it21() const { return it21_; }
  const Eigen::ArrayXXd& it22() const { return it22_; }
  // Connection terms x_{s phi} and x_{phi phi} per node.
  const Eigen::ArrayXXd& csf1() const { return csf1_; }
  const Eigen::ArrayXXd& csf2() const { return csf2_; }
  const Eigen::ArrayXXd& cff1() const { return cff1_; }
  const Eigen::ArrayXXd& cff2() const { return cff2_; }

  // Same data on the boundary faces (s = 1), indexed by k.
  const Eigen::ArrayXd& face_X() const { return fx_; }
  const Eigen::ArrayXd& face_Y() const { return fy_; }
  const Eigen::ArrayXd& face_nu1() const { return fnu1_; }
  const Eigen::ArrayXd& face_nu2() const { return fnu2_; }
  const Eigen::ArrayXd& face_it11() const { return fit11_; }
  const Eigen::ArrayXd& face_it12() const { return fit12_; }
  const Eigen::ArrayXd& face_it21() const { return fit21_; }
  const Eigen::ArrayXd& face_it22() const { return fit22_; }
  const Eigen::ArrayXd& face_csf1() const { return fcsf1_; }
  const Eigen::ArrayXd& face_csf2() const { return fcsf2_; }
  const Eigen::ArrayXd& face_cff1() const { return fcff1_; }
  const Eigen::ArrayXd& face_cff2() const { return fcff2_; }
  /// Arclength element |x_phi| at the boundary faces.
  const Eigen::ArrayXd& face_arc() const { return farc_; }

  // Spectral azimuthal derivative matrices (nphi x nphi).
  const Eigen::MatrixXd& D1() const { return D1_; }
  const Eigen::MatrixXd& D2() const { return D2_; }

  int mode_cap(int ring) const { return mode_cap_[ring]; }
  /// Rings whose azimuthal content is capped, with their projections.
  const std::vector<std::pair<int, Eigen::MatrixXd>>& ring_filters() const { return filters_; }

  /// Smallest stably resolved node spacing; the explicit step uses
  /// dt = sigma * cfl_spacing^2 / (2 n).
  double cfl_spacing() const { return cfl_spacing_; }
  /// Estimate-audit tolerance 1e-8 + 10 * cfl_spacing^2.
  double monitor_tol() const { return 1e-8 + 10.0 * cfl_spacing_ * cfl_spacing_; }

  /// Continuous grid coordinates of a point: ring index js in [-0.5, ns-0.5]
  /// space and periodic column index kf.  Returns false when the point lies
  /// outside the cell-centered interpolation range [0, ns-1].
  bool locate(const Eigen::Vector2d& p, double& js, double& kf) const;
  /// Bilinear interpolation of a (nphi x ns) nodal array, periodic in phi.
  double interpolate(const Eigen::ArrayXXd& a, double js, double kf) const;

 private:
  Grid() = default;

  int dim_ = 1;
  ConvexDomain domain_;

  int n1_ = 0;
  double delta_ = 0.0;
  Eigen::ArrayXd x1_;

  int ns_ = 0, nphi_ = 0;
  double ds_ = 0.0, dphi_ = 0.0;
  Eigen::ArrayXXd X_, Y_;
  Eigen::ArrayXd gx_, gy_;
  Eigen::ArrayXXd it11_, it12_, it21_, it22_;
  Eigen::ArrayXXd csf1_, csf2_, cff1_, cff2_;
  Eigen::ArrayXd fx_, fy_, fnu1_, fnu2_;
  Eigen::ArrayXd fit11_, fit12_, fit21_, fit22_;
  Eigen::ArrayXd fcsf1_, fcsf2_, fcff1_, fcff2_, farc_;
  Eigen::MatrixXd D1_, D2_;
  std::vector<int> mode_cap_;
  std::vector<std::pair<int, Eigen::MatrixXd>> filters_;
  double cfl_spacing_ = 0.0;
};

}  // namespace lagflow
