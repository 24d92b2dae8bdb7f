#include "lagflow/steady.hpp"

namespace lagflow {

namespace {

constexpr double kFaceW[3] = {3.0 / 8.0, -5.0 / 4.0, 15.0 / 8.0};

int anchor_index_1d(const Grid& g) { return g.n1() / 2; }

int anchor_column_2d(const Grid& g) {
  int best = 0;
  double best_r = std::numeric_limits<double>::infinity();
  for (int k = 0; k < g.nphi(); ++k) {
    const double r = g.domain().rho(g.phi(k));
    if (r < best_r) {
      best_r = r;
      best = k;
    }
  }
  return best;
}

bool same_grid(const Grid& a, const Grid& b) {
  if (&a == &b) return true;
  if (a.dim() != b.dim()) return false;
  if (a.dim() == 1) return a.n1() == b.n1() && std::abs(a.delta() - b.delta()) < 1e-14;
  return a.ns() == b.ns() && a.nphi() == b.nphi() &&
         (a.domain().center() - b.domain().center()).norm() < 1e-12 &&
         (a.domain().shape_matrix() - b.domain().shape_matrix()).norm() < 1e-12;
}

struct Residual {
  Eigen::VectorXd r;
  double interior = 0.0, boundary = 0.0, anchor = 0.0;
  double max_norm() const { return std::max({interior, boundary, anchor}); }
};

class Steady1D {
 public:
  Steady1D(std::shared_ptr<const Grid> grid, const ConvexDomain& target)
      : g_(std::move(grid)), target_(target), n_(g_->n1()), anchor_(anchor_index_1d(*g_)) {}

  int size() const { return n_ + 2; }

  double grad_left(const Eigen::VectorXd& z) const {
    return (-3.0 * z(0) + 4.0 * z(1) - z(2)) / (2.0 * g_->delta());
  }
  double grad_right(const Eigen::VectorXd& z) const {
    return (3.0 * z(n_) - 4.0 * z(n_ - 1) + z(n_ - 2)) / (2.0 * g_->delta());
  }

  Residual residual(const Eigen::VectorXd& z) const {
    Residual res;
    res.r.setZero(size());
    const double c = z(n_ + 1);
    const double d2 = g_->delta() * g_->delta();
    res.r(0) = target_.h({grad_left(z), 0.0});
    for (int i = 1; i < n_; ++i) {
      const double upp = (z(i + 1) - 2.0 * z(i) + z(i - 1)) / d2;
      res.r(i) = std::atan(upp) - c;
      res.interior = std::max(res.interior, std::abs(res.r(i)));
    }
    res.r(n_) = target_.h({grad_right(z), 0.0});
    res.boundary = std::max(std::abs(res.r(0)), std::abs(res.r(n_)));
    res.r(n_ + 1) = z(anchor_);
    res.anchor = std::abs(res.r(n_ + 1));
    return res;
  }

  bool convex(const Eigen::VectorXd& z) const {
    const double d2 = g_->delta() * g_->delta();
    for (int i = 1; i < n_; ++i) {
      if (!((z(i + 1) - 2.0 * z(i) + z(i - 1)) / d2 > 0.0)) return false;
    }
    return true;
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& z) const {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(size(), size());
    const double d = g_->delta();
    const double d2 = d * d;
    {
      const double hp = target_.grad_h({grad_left(z), 0.0}).x();
      J(0, 0) = hp * -3.0 / (2.0 * d);
      J(0, 1) = hp * 4.0 / (2.0 * d);
      J(0, 2) = hp * -1.0 / (2.0 * d);
    }
    for (int i = 1; i < n_; ++i) {
      const double upp = (z(i + 1) - 2.0 * z(i) + z(i - 1)) / d2;
      const double gm = 1.0 / (1.0 + upp * upp);
      J(i, i - 1) = gm / d2;
      J(i, i) = -2.0 * gm / d2;
      J(i, i + 1) = gm / d2;
      J(i, n_ + 1) = -1.0;
    }
    {
      const double hp = target_.grad_h({grad_right(z), 0.0}).x();
      J(n_, n_) = hp * 3.0 / (2.0 * d);
      J(n_, n_ - 1) = hp * -4.0 / (2.0 * d);
      J(n_, n_ - 2) = hp * 1.0 / (2.0 * d);
    }
    J(n_ + 1, anchor_) = 1.0;
    return J;
  }

  Eigen::VectorXd pack(const Field& f, double c) const {
    Eigen::VectorXd z(size());
    z.head(n_ + 1) = f.v.col(0);
    z(n_ + 1) = c;
    return z;
  }
  void unpack(const Eigen::VectorXd& z, Field& f, double& c) const {
    f.v.col(0) = z.head(n_ + 1);
    c = z(n_ + 1);
    f.extrapolate_ghost();
  }

 private:
  std::shared_ptr<const Grid> g_;
  ConvexDomain target_;
  int n_;
  int anchor_;
};

class Steady2D {
 public:
  Steady2D(std::shared_ptr<const Grid> grid, const ConvexDomain& target)
      : g_(std::move(grid)), target_(target), ns_(g_->ns()), nphi_(g_->nphi()),
        anchor_(anchor_column_2d(*g_)), tmp_(g_) {}

  int size() const { return ns_ * nphi_ + nphi_ + 1; }
  int id(int r, int k) const { return r * nphi_ + k; }
  int gid(int k) const { return ns_ * nphi_ + k; }
  int cid() const { return ns_ * nphi_ + nphi_; }
  int lower(int r, int k) const { return r == 0 ? id(0, g_->pole_partner(k)) : id(r - 1, k); }
  int upper(int r, int k) const { return r == ns_ - 1 ? gid(k) : id(r + 1, k); }

  void to_field(const Eigen::VectorXd& z, Field& f) const {
    for (int r = 0; r < ns_; ++r)
      for (int k = 0; k < nphi_; ++k) f.v(k, r) = z(id(r, k));
    for (int k = 0; k < nphi_; ++k) f.ghost(k) = z(gid(k));
  }

  Residual residual(const Eigen::VectorXd& z) {
    to_field(z, tmp_);
    differentiate_into(tmp_, jet_);
    face_jet_into(tmp_, face_);
    Residual res;
    res.r.setZero(size());
    const double c = z(cid());
    for (int r = 0; r < ns_; ++r) {
      for (int k = 0; k < nphi_; ++k) {
        res.r(id(r, k)) = jet_.F(k, r) - c;
        res.interior = std::max(res.interior, std::abs(res.r(id(r, k))));
      }
    }
    for (int k = 0; k < nphi_; ++k) {
      res.r(gid(k)) = target_.h({face_.ux(k), face_.uy(k)});
      res.boundary = std::max(res.boundary, std::abs(res.r(gid(k))));
    }
    res.r(cid()) = z(id(0, anchor_));
    res.anchor = std::abs(res.r(cid()));
    return res;
  }

  bool convex(const Eigen::VectorXd& z) {
    to_field(z, tmp_);
    differentiate_into(tmp_, jet_);
    return jet_.lam1.minCoeff() > 0.0;
  }

  // Jacobian at the state of the last residual() call.
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& z) {
    to_field(z, tmp_);
    differentiate_into(tmp_, jet_);
    face_jet_into(tmp_, face_);
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(size(), size());
    const double ds = g_->ds();
    const auto& D1 = g_->D1();
    const auto& D2 = g_->D2();

    for (int r = 0; r < ns_; ++r) {
      for (int k = 0; k < nphi_; ++k) {
        const int row = id(r, k);
        Eigen::Matrix2d H;
        H << jet_.hxx(k, r), jet_.hxy(k, r), jet_.hxy(k, r), jet_.hyy(k, r);
        const Eigen::Matrix2d gm = linearized_metric(H, 2);
        const double i11 = g_->it11()(k, r), i12 = g_->it12()(k, r);
        const double i21 = g_->it21()(k, r), i22 = g_->it22()(k, r);
        const double w11 = gm(0, 0) * i11 * i11 + 2.0 * gm(0, 1) * i11 * i21 +
                           gm(1, 1) * i21 * i21;
        const double w12 = gm(0, 0) * 2.0 * i11 * i12 +
                           2.0 * gm(0, 1) * (i11 * i22 + i12 * i21) +
                           gm(1, 1) * 2.0 * i21 * i22;
        const double w22 = gm(0, 0) * i12 * i12 + 2.0 * gm(0, 1) * i12 * i22 +
                           gm(1, 1) * i22 * i22;
        const double q1 = w12 * g_->csf1()(k, r) + w22 * g_->cff1()(k, r);
        const double q2 = w12 * g_->csf2()(k, r) + w22 * g_->cff2()(k, r);
        const double wus = -(q1 * i11 + q2 * i21);
        const double wuphi = -(q1 * i12 + q2 * i22);

        const int up = upper(r, k), lo = lower(r, k);
        J(row, up) += w11 / (ds * ds) + wus / (2.0 * ds);
        J(row, row) += -2.0 * w11 / (ds * ds);
        J(row, lo) += w11 / (ds * ds) - wus / (2.0 * ds);
        for (int l = 0; l < nphi_; ++l) {
          const double d1 = D1(k, l);
          J(row, id(r, l)) += wuphi * d1 + w22 * D2(k, l);
          J(row, upper(r, l)) += w12 * d1 / (2.0 * ds);
          J(row, lower(r, l)) -= w12 * d1 / (2.0 * ds);
        }
        J(row, cid()) = -1.0;
      }
    }

    for (int k = 0; k < nphi_; ++k) {
      const int row = gid(k);
      const Eigen::Vector2d beta = target_.grad_h({face_.ux(k), face_.uy(k)});
      const double wfs = beta.x() * g_->face_it11()(k) + beta.y() * g_->face_it21()(k);
      const double wfphi = beta.x() * g_->face_it12()(k) + beta.y() * g_->face_it22()(k);
      J(row, gid(k)) += wfs / ds;
      J(row, id(ns_ - 1, k)) -= wfs / ds;
      for (int i = 0; i < 3; ++i) {
        const int ring = ns_ - 3 + i;
        for (int l = 0; l < nphi_; ++l) {
          J(row, id(ring, l)) += wfphi * kFaceW[i] * D1(k, l);
        }
      }
    }
    J(cid(), id(0, anchor_)) = 1.0;
    return J;
  }

  Eigen::VectorXd pack(const Field& f, double c) const {
    Eigen::VectorXd z(size());
    for (int r = 0; r < ns_; ++r)
      for (int k = 0; k < nphi_; ++k) z(id(r, k)) = f.v(k, r);
    for (int k = 0; k < nphi_; ++k) z(gid(k)) = f.ghost(k);
    z(cid()) = c;
    return z;
  }
  void unpack(const Eigen::VectorXd& z, Field& f, double& c) const {
    to_field(z, f);
    c = z(cid());
  }

 private:
  std::shared_ptr<const Grid> g_;
  ConvexDomain target_;
  int ns_, nphi_, anchor_;
  Field tmp_;
  JetField jet_;
  FaceJet face_;
};

template <class System>
SteadySolution newton_drive(System& sys, std::shared_ptr<const Grid> grid, const Field& guess,
                            double tol_s, int max_iter) {
  SteadySolution out;
  out.field = Field(grid);
  out.field.t = guess.t;

  const JetField jg = differentiate(guess);
  if (!(jg.lam1.minCoeff() > 0.0)) {
    throw std::invalid_argument("steady: initial guess must be strictly convex");
  }
  Eigen::VectorXd z = sys.pack(guess, jg.F.mean());
  Residual res = sys.residual(z);
  double norm2 = res.r.norm();
  out.residual_history.push_back(norm2);

  while (out.iterations < max_iter && res.max_norm() > tol_s) {
    const Eigen::MatrixXd J = sys.jacobian(z);
    const Eigen::VectorXd delta = Eigen::PartialPivLU<Eigen::MatrixXd>(J).solve(-res.r);
    if (!delta.allFinite()) break;

    double alpha = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 30; ++ls) {
      const Eigen::VectorXd trial = z + alpha * delta;
      if (sys.convex(trial)) {
        const Residual tres = sys.residual(trial);
        if (tres.r.norm() < norm2) {
          z = trial;
          res = tres;
          norm2 = tres.r.norm();
          out.residual_history.push_back(norm2);
          accepted = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    ++out.iterations;
    if (!accepted) break;  // line-search stagnation: return the best iterate
  }

  sys.unpack(z, out.field, out.c);
  out.residual_interior = res.interior;
  out.residual_boundary = res.boundary;
  out.residual_anchor = res.anchor;
  out.converged = res.max_norm() <= tol_s;
  return out;
}

}  // namespace

ClosedForm1D steady_1d_closed_form(double a, double b, double ta, double tb) {
  if (!(a < b) || !(ta < tb)) throw std::invalid_argument("steady: degenerate interval");
  ClosedForm1D out;
  out.a = a;
  out.ta = ta;
  out.k = (tb - ta) / (b - a);
  out.c = std::atan(out.k);
  return out;
}

SteadySolution steady_1d_closed_form(std::shared_ptr<const Grid> grid, double ta, double tb) {
  if (grid->dim() != 1) throw std::invalid_argument("steady: closed form is 1D");
  const ClosedForm1D cf = steady_1d_closed_form(grid->domain().interval_a(),
                                                grid->domain().interval_b(), ta, tb);
  SteadySolution out;
  out.field = Field(grid);
  for (int j = 0; j <= grid->n1(); ++j) out.field.v(j, 0) = cf.value(grid->x1()(j));
  out.field.extrapolate_ghost();
  out.c = cf.c;
  out.converged = true;
  return out;
}

SteadySolution solve_steady(std::shared_ptr<const Grid> grid, const ConvexDomain& omega_tilde,
                            const Field& initial_guess, double tol_s, int max_iter) {
  if (!same_grid(*grid, *initial_guess.grid)) {
    throw std::invalid_argument("steady: initial guess lives on a different grid");
  }
  if (grid->dim() == 1) {
    Steady1D sys(grid, omega_tilde);
    return newton_drive(sys, grid, initial_guess, tol_s, max_iter);
  }
  Steady2D sys(grid, omega_tilde);
  return newton_drive(sys, grid, initial_guess, tol_s, max_iter);
}

FlowSteadyGap compare_flow_vs_steady(const FlowState& flow_final, const SteadySolution& steady) {
  const Grid& g = *flow_final.field.grid;
  if (!same_grid(g, *steady.field.grid)) {
    throw std::invalid_argument("compare: flow and steady solution live on different grids");
  }
  const JetField jf = differentiate(flow_final.field);
  const JetField js = differentiate(steady.field);
  FlowSteadyGap gap;
  if (g.dim() == 1) {
    for (int j = 1; j < g.n1(); ++j) {
      gap.grad_gap = std::max(gap.grad_gap, std::abs(jf.ux(j, 0) - js.ux(j, 0)));
    }
  } else {
    gap.grad_gap = std::max((jf.ux - js.ux).abs().maxCoeff(), (jf.uy - js.uy).abs().maxCoeff());
  }
  gap.c_gap = std::abs(flow_final.c_estimate - steady.c);
  return gap;
}

}  // namespace lagflow
