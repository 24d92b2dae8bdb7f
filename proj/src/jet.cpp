#include "lagflow/jet.hpp"

namespace lagflow {

namespace {

// Quadratic interpolation from the three outermost rings to the face s = 1.
// Ring offsets from the face are (-5/2, -3/2, -1/2) * ds.
constexpr double kW0 = 3.0 / 8.0;    // ring ns-3
constexpr double kW1 = -5.0 / 4.0;   // ring ns-2
constexpr double kW2 = 15.0 / 8.0;   // ring ns-1

void eig_phase(JetField& jet, int dim) {
  if (dim == 1) {
    jet.lam1 = jet.hxx;
    jet.F = jet.hxx.atan();
    return;
  }
  const Eigen::ArrayXXd mid = 0.5 * (jet.hxx + jet.hyy);
  const Eigen::ArrayXXd rad = (0.25 * (jet.hxx - jet.hyy).square() + jet.hxy.square()).sqrt();
  jet.lam1 = mid - rad;
  jet.lam2 = mid + rad;
  jet.F = jet.lam1.atan() + jet.lam2.atan();
}

}  // namespace

void differentiate_into(const Field& f, JetField& jet) {
  const Grid& g = *f.grid;
  if (g.dim() == 1) {
    const int n = g.n1();
    const double d = g.delta();
    Eigen::ArrayXd ue(n + 3);
    ue(0) = f.ghost(0);
    ue.segment(1, n + 1) = f.v.col(0).array();
    ue(n + 2) = f.ghost(1);
    jet.ux = (ue.segment(2, n + 1) - ue.segment(0, n + 1)) / (2.0 * d);
    jet.hxx =
        (ue.segment(2, n + 1) - 2.0 * ue.segment(1, n + 1) + ue.segment(0, n + 1)) / (d * d);
    jet.uy.setZero(n + 1, 1);
    jet.hxy.setZero(n + 1, 1);
    jet.hyy.setZero(n + 1, 1);
    jet.lam2.setZero(n + 1, 1);
    eig_phase(jet, 1);
    return;
  }

  const int ns = g.ns(), nphi = g.nphi();
  const double ds = g.ds();
  jet.Ue.resize(nphi, ns + 2);
  for (int k = 0; k < nphi; ++k) jet.Ue(k, 0) = f.v(g.pole_partner(k), 0);
  jet.Ue.middleCols(1, ns) = f.v;
  jet.Ue.col(ns + 1) = f.ghost.matrix();

  jet.Us = (jet.Ue.middleCols(2, ns) - jet.Ue.middleCols(0, ns)) / (2.0 * ds);
  jet.Uss = (jet.Ue.middleCols(2, ns) - 2.0 * jet.Ue.middleCols(1, ns) +
             jet.Ue.middleCols(0, ns)) / (ds * ds);
  jet.Uphi.noalias() = g.D1() * f.v;
  jet.Uphiphi.noalias() = g.D2() * f.v;
  jet.Usphi.noalias() = g.D1() * jet.Us;

  jet.ux = g.it11() * jet.Us.array() + g.it12() * jet.Uphi.array();
  jet.uy = g.it21() * jet.Us.array() + g.it22() * jet.Uphi.array();
  const Eigen::ArrayXXd p12 = jet.Usphi.array() - (jet.ux * g.csf1() + jet.uy * g.csf2());
  const Eigen::ArrayXXd p22 = jet.Uphiphi.array() - (jet.ux * g.cff1() + jet.uy * g.cff2());
  const auto p11 = jet.Uss.array();

  jet.hxx = g.it11().square() * p11 + 2.0 * g.it11() * g.it12() * p12 + g.it12().square() * p22;
  jet.hxy = g.it11() * g.it21() * p11 + (g.it11() * g.it22() + g.it12() * g.it21()) * p12 +
            g.it12() * g.it22() * p22;
  jet.hyy = g.it21().square() * p11 + 2.0 * g.it21() * g.it22() * p12 + g.it22().square() * p22;
  eig_phase(jet, 2);
}

JetField differentiate(const Field& f) {
  JetField jet;
  differentiate_into(f, jet);
  return jet;
}

void face_jet_into(const Field& f, FaceJet& face) {
  const Grid& g = *f.grid;
  if (g.dim() == 1) {
    JetField jet = differentiate(f);
    face.ux.resize(2);
    face.uy.setZero(2);
    face.hxx.resize(2);
    face.hxy.setZero(2);
    face.hyy.setZero(2);
    face.ux << jet.ux(0, 0), jet.ux(g.n1(), 0);
    face.hxx << jet.hxx(0, 0), jet.hxx(g.n1(), 0);
    return;
  }

  const int ns = g.ns();
  const double ds = g.ds();
  const auto c1 = f.v.col(ns - 2), c2 = f.v.col(ns - 1);

  const Eigen::VectorXd us = (f.ghost.matrix() - c2) / ds;
  const Eigen::VectorXd uss = (f.ghost - 2.0 * c2.array() + c1.array()).matrix() / (ds * ds);
  const Eigen::MatrixXd outer3 = g.D1() * f.v.rightCols(3);
  const Eigen::VectorXd uphi = kW0 * outer3.col(0) + kW1 * outer3.col(1) + kW2 * outer3.col(2);
  const Eigen::MatrixXd outer3pp = g.D2() * f.v.rightCols(3);
  const Eigen::VectorXd uphiphi =
      kW0 * outer3pp.col(0) + kW1 * outer3pp.col(1) + kW2 * outer3pp.col(2);
  const Eigen::VectorXd usphi = g.D1() * us;

  face.ux = g.face_it11() * us.array() + g.face_it12() * uphi.array();
  face.uy = g.face_it21() * us.array() + g.face_it22() * uphi.array();
  const Eigen::ArrayXd p12 = usphi.array() - (face.ux * g.face_csf1() + face.uy * g.face_csf2());
  const Eigen::ArrayXd p22 =
      uphiphi.array() - (face.ux * g.face_cff1() + face.uy * g.face_cff2());
  const Eigen::ArrayXd& p11 = uss.array();

  const auto& i11 = g.face_it11();
  const auto& i12 = g.face_it12();
  const auto& i21 = g.face_it21();
  const auto& i22 = g.face_it22();
  face.hxx = i11.square() * p11 + 2.0 * i11 * i12 * p12 + i12.square() * p22;
  face.hxy = i11 * i21 * p11 + (i11 * i22 + i12 * i21) * p12 + i12 * i22 * p22;
  face.hyy = i21.square() * p11 + 2.0 * i21 * i22 * p12 + i22.square() * p22;
}

FaceJet face_jet(const Field& f) {
  FaceJet face;
  face_jet_into(f, face);
  return face;
}

Eigen::Vector2d eigen_sym(const Eigen::Matrix2d& h, int n) {
  if (n == 1) return {h(0, 0), 0.0};
  const double mid = 0.5 * (h(0, 0) + h(1, 1));
  const double dif = 0.5 * (h(0, 0) - h(1, 1));
  const double rad = std::sqrt(dif * dif + h(0, 1) * h(0, 1));
  return {mid - rad, mid + rad};
}

double lagrangian_phase(const Eigen::Vector2d& lam, int n) {
  double F = std::atan(lam(0));
  if (n == 2) F += std::atan(lam(1));
  return F;
}

Eigen::Matrix2d linearized_metric(const Eigen::Matrix2d& h, int n) {
  Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
  if (n == 1) {
    g(0, 0) = 1.0 / (1.0 + h(0, 0) * h(0, 0));
    return g;
  }
  const Eigen::Matrix2d a = Eigen::Matrix2d::Identity() + h * h;
  const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  g(0, 0) = a(1, 1) / det;
  g(1, 1) = a(0, 0) / det;
  g(0, 1) = g(1, 0) = -a(0, 1) / det;
  return g;
}

void gradient_image_h(const JetField& jet, const ConvexDomain& target, Eigen::ArrayXXd& out) {
  if (target.dim() == 1) {
    const double a = target.interval_a(), b = target.interval_b();
    out = (b - jet.ux) * (jet.ux - a) / (b - a);
    return;
  }
  const Eigen::Matrix2d& m = target.shape_matrix();
  const Eigen::Vector2d& c = target.center();
  const Eigen::ArrayXXd dx = jet.ux - c.x();
  const Eigen::ArrayXXd dy = jet.uy - c.y();
  out = target.scale() *
        (1.0 - (m(0, 0) * dx.square() + 2.0 * m(0, 1) * dx * dy + m(1, 1) * dy.square()));
}

}  // namespace lagflow
