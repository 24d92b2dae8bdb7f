#pragma once

#include "lagflow/field.hpp"

namespace lagflow {

/// Pointwise derived quantities of a potential: gradient, Hessian, sorted
/// Hessian eigenvalues and the phase F = sum_i arctan(lambda_i).
/// Arrays are (nphi x ns) in 2D and (n+1) x 1 in 1D; the 1D entries use the
/// x-components only.
struct JetField {
  Eigen::ArrayXXd ux, uy;
  Eigen::ArrayXXd hxx, hxy, hyy;
  Eigen::ArrayXXd lam1, lam2;
  Eigen::ArrayXXd F;

  // scratch for the 2D transform, reused across calls
  Eigen::MatrixXd Ue, Us, Uss, Uphi, Uphiphi, Usphi;
};

/// Gradient and one-sided Hessian at the domain boundary: the faces
/// (s = 1, phi_k) in 2D, the endpoint nodes in 1D.
struct FaceJet {
  Eigen::ArrayXd ux, uy;
  Eigen::ArrayXd hxx, hxy, hyy;
};

/// Fill `jet` from the field values and ghosts; allocation-free once the
/// jet buffers match the grid.
void differentiate_into(const Field& f, JetField& jet);
JetField differentiate(const Field& f);

void face_jet_into(const Field& f, FaceJet& face);
FaceJet face_jet(const Field& f);

/// Sorted eigenvalues of a symmetric 1x1 or 2x2 matrix (closed form).
Eigen::Vector2d eigen_sym(const Eigen::Matrix2d& h, int n);

/// F = sum_i arctan(lambda_i).
double lagrangian_phase(const Eigen::Vector2d& lam, int n);

/// g = (I + H^2)^{-1} by direct inversion; shares eigenvectors with H.
Eigen::Matrix2d linearized_metric(const Eigen::Matrix2d& h, int n);

/// Defining-function values h(Du) of `target` at every node, written into
/// `out` (gradient-image confinement monitor).
void gradient_image_h(const JetField& jet, const ConvexDomain& target, Eigen::ArrayXXd& out);

}  // namespace lagflow
