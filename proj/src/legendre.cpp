#include "lagflow/legendre.hpp"

namespace lagflow {

namespace {

struct Conjugate {
  double value = 0.0;
  bool extrapolated = false;
};

Conjugate conjugate_at(const Eigen::Vector2d& y, const Field& u, const JetField& jet) {
  const Grid& g = *u.grid;
  Conjugate out;
  if (g.dim() == 1) {
    int best = 0;
    double best_val = -std::numeric_limits<double>::infinity();
    for (int j = 0; j <= g.n1(); ++j) {
      const double cand = g.x1()(j) * y.x() - u.v(j, 0);
      if (cand > best_val) {
        best_val = cand;
        best = j;
      }
    }
    const double h = jet.hxx(best, 0);
    const double d = y.x() - jet.ux(best, 0);
    out.value = best_val + 0.5 * d * d / h;
    if (best == 0 || best == g.n1()) {
      const double xs = g.x1()(best) + d / h;
      out.extrapolated = xs < g.x1()(0) || xs > g.x1()(g.n1());
    }
    return out;
  }

  Eigen::Index bk = 0, bj = 0;
  const Eigen::ArrayXXd cand = g.X() * y.x() + g.Y() * y.y() - u.v.array();
  const double best_val = cand.maxCoeff(&bk, &bj);
  const Eigen::Vector2d du(jet.ux(bk, bj), jet.uy(bk, bj));
  Eigen::Matrix2d H;
  H << jet.hxx(bk, bj), jet.hxy(bk, bj), jet.hxy(bk, bj), jet.hyy(bk, bj);
  const Eigen::Vector2d d = y - du;
  const Eigen::Vector2d delta = H.inverse() * d;
  out.value = best_val + 0.5 * d.dot(delta);
  if (bj == g.ns() - 1) {
    const Eigen::Vector2d xs = Eigen::Vector2d(g.X()(bk, bj), g.Y()(bk, bj)) + delta;
    out.extrapolated = !g.domain().contains(xs);
  }
  return out;
}

}  // namespace

DualField legendre_transform(const Field& u, const JetField& jet,
                             std::shared_ptr<const Grid> dual_grid) {
  if (!(jet.lam1.minCoeff() > 0.0)) {
    throw std::invalid_argument("legendre: source field must be strictly convex");
  }
  DualField out;
  out.field = Field(dual_grid);
  out.field.t = u.t;
  const Grid& dg = *dual_grid;
  if (dg.dim() == 1) {
    for (int j = 0; j <= dg.n1(); ++j) {
      const Conjugate c = conjugate_at({dg.x1()(j), 0.0}, u, jet);
      out.field.v(j, 0) = c.value;
      out.extrapolated += c.extrapolated;
    }
  } else {
    for (int j = 0; j < dg.ns(); ++j) {
      for (int k = 0; k < dg.nphi(); ++k) {
        const Conjugate c = conjugate_at({dg.X()(k, j), dg.Y()(k, j)}, u, jet);
        out.field.v(k, j) = c.value;
        out.extrapolated += c.extrapolated;
      }
    }
  }
  out.field.extrapolate_ghost();
  return out;
}

DualField legendre_transform(const Field& u, std::shared_ptr<const Grid> dual_grid) {
  return legendre_transform(u, differentiate(u), std::move(dual_grid));
}

HessianInverseReport hessian_inverse_check(const Field& u, const DualField& dual) {
  const Grid& sg = *u.grid;
  const Grid& dg = *dual.field.grid;
  const JetField jet = differentiate(u);
  const JetField djet = differentiate(dual.field);
  HessianInverseReport rep;

  auto probe = [&](const Eigen::Vector2d& y, const Eigen::Matrix2d& hx) {
    Eigen::Matrix2d hd = Eigen::Matrix2d::Zero();
    if (dg.dim() == 1) {
      const double js = (y.x() - dg.x1()(0)) / dg.delta();
      if (js < 0.0 || js > dg.n1()) {
        ++rep.skipped;
        return;
      }
      const int j0 = std::min(dg.n1() - 1, int(js));
      const double tj = js - j0;
      hd(0, 0) = (1.0 - tj) * djet.hxx(j0, 0) + tj * djet.hxx(j0 + 1, 0);
      const double p = hd(0, 0) * hx(0, 0) - 1.0;
      rep.max_discrepancy = std::max(rep.max_discrepancy, std::abs(p));
    } else {
      double js, kf;
      if (!dg.locate(y, js, kf)) {
        ++rep.skipped;
        return;
      }
      hd(0, 0) = dg.interpolate(djet.hxx, js, kf);
      hd(0, 1) = hd(1, 0) = dg.interpolate(djet.hxy, js, kf);
      hd(1, 1) = dg.interpolate(djet.hyy, js, kf);
      const Eigen::Matrix2d p = hd * hx - Eigen::Matrix2d::Identity();
      rep.max_discrepancy = std::max(rep.max_discrepancy, p.cwiseAbs().maxCoeff());
    }
    ++rep.sampled;
  };

  if (sg.dim() == 1) {
    for (int j = 1; j < sg.n1(); ++j) {
      Eigen::Matrix2d hx = Eigen::Matrix2d::Zero();
      hx(0, 0) = jet.hxx(j, 0);
      probe({jet.ux(j, 0), 0.0}, hx);
    }
  } else {
    for (int j = 0; j < sg.ns(); ++j) {
      for (int k = 0; k < sg.nphi(); ++k) {
        Eigen::Matrix2d hx;
        hx << jet.hxx(k, j), jet.hxy(k, j), jet.hxy(k, j), jet.hyy(k, j);
        probe({jet.ux(k, j), jet.uy(k, j)}, hx);
      }
    }
  }
  return rep;
}

DualFlowReport dual_flow_residual(const DualField& a, const DualField& b) {
  const Grid& g = *a.field.grid;
  if (a.field.grid != b.field.grid) {
    throw std::invalid_argument("dual_flow_residual: slices must share one dual grid");
  }
  const double dt = b.field.t - a.field.t;
  if (!(dt > 0.0)) throw std::invalid_argument("dual_flow_residual: need increasing times");
  const JetField ja = differentiate(a.field);
  const JetField jb = differentiate(b.field);
  const double off = g.dim() * M_PI / 2.0;
  DualFlowReport rep;
  if (g.dim() == 1) {
    for (int j = 1; j < g.n1(); ++j) {
      const double ut = (b.field.v(j, 0) - a.field.v(j, 0)) / dt;
      const double fbar = 0.5 * (ja.F(j, 0) + jb.F(j, 0));
      rep.max_residual = std::max(rep.max_residual, std::abs(ut - fbar + off));
      ++rep.sampled;
    }
  } else {
    for (int j = 0; j < g.ns() - 1; ++j) {
      for (int k = 0; k < g.nphi(); ++k) {
        const double ut = (b.field.v(k, j) - a.field.v(k, j)) / dt;
        const double fbar = 0.5 * (ja.F(k, j) + jb.F(k, j));
        rep.max_residual = std::max(rep.max_residual, std::abs(ut - fbar + off));
        ++rep.sampled;
      }
    }
  }
  return rep;
}

}  // namespace lagflow
