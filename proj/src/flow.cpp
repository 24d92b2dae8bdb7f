#include "lagflow/flow.hpp"

#include <cmath>

#include "lagflow/monitors.hpp"

namespace lagflow {

double bump(double z) {
  const double z2 = z * z;
  if (z2 >= 1.0 - 1e-14) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - z2));
}

double Generator::value(const Eigen::Vector2d& x) const {
  const Eigen::Vector2d d = x - xc;
  double u = 0.5 * d.dot(A * d) + b.dot(x);
  if (kind == Kind::Perturbed) {
    u += eps * bump((x - bump_center).norm() / bump_width);
  }
  return u;
}

void StepControl::validate() const {
  if (!(sigma > 0.0 && sigma <= 1.0)) throw std::invalid_argument("control: sigma must be in (0,1]");
  if (!(tol_c > 0.0)) throw std::invalid_argument("control: tol_c must be positive");
  if (!(tol_b > 0.0)) throw std::invalid_argument("control: tol_b must be positive");
  if (boundary_max_iter < 1) throw std::invalid_argument("control: boundary_max_iter must be >= 1");
  if (max_steps < 0) throw std::invalid_argument("control: max_steps must be >= 0");
}

double cfl_dt(const Grid& grid, double sigma) {
  const double sp = grid.cfl_spacing();
  return sigma * sp * sp / (2.0 * grid.dim());
}

namespace {

void apply_mode_caps(Field& f) {
  if (f.grid->dim() == 1) return;
  for (const auto& [ring, proj] : f.grid->ring_filters()) {
    f.v.col(ring) = (proj * f.v.col(ring)).eval();
  }
}

// Scalar boundary equation r(t) = h(p0 + t w) for one ghost value; h is
// strictly concave, so r is a downward parabola and the physical root is the
// one on the decreasing branch (r' < 0, obliqueness).  Safeguarded Newton
// with a bisection fallback.
struct ColumnSolve {
  bool converged = false;
  bool monotone = true;
  double root = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

ColumnSolve solve_ghost(const ConvexDomain& target, const Eigen::Vector2d& p0,
                        const Eigen::Vector2d& w, double warm, double tol, int max_iter) {
  ColumnSolve out;
  const double hw = w.dot(target.hess_h() * w);  // constant, < 0
  auto r = [&](double t) { return target.h(p0 + t * w); };
  auto rp = [&](double t) { return target.grad_h(p0 + t * w).dot(w); };

  const double tv = warm - rp(warm) / hw;  // vertex (r' is affine in t)
  const double rv = r(tv);
  if (!(rv >= 0.0)) {
    out.residual = rv;
    return out;  // the line misses the target domain: incompatible data
  }
  const double half_width = std::sqrt(-2.0 * rv / hw);
  double t = (warm > tv + 1e-14 * (1.0 + std::abs(tv))) ? warm : tv + half_width;
  double lo = tv;
  double hi = std::numeric_limits<double>::infinity();

  double res = r(t);
  while (std::abs(res) > tol && out.iterations < max_iter) {
    ++out.iterations;
    if (res >= 0.0) lo = std::max(lo, t); else hi = std::min(hi, t);
    const double slope = rp(t);
    if (!(slope < 0.0)) out.monotone = false;
    double tn = t - res / slope;
    const bool bad = !std::isfinite(tn) || tn <= lo || tn >= hi;
    if (bad) tn = std::isfinite(hi) ? 0.5 * (lo + hi) : lo + 2.0 * (half_width + (t - lo));
    t = tn;
    res = r(t);
  }
  out.root = t;
  out.residual = res;
  out.converged = std::abs(res) <= tol;
  if (!(rp(t) < 0.0)) out.monotone = false;
  return out;
}

}  // namespace

BoundaryReport enforce_boundary(FlowState& state, const StepControl& ctl) {
  const Grid& g = *state.field.grid;
  const ConvexDomain& target = state.omega_tilde;
  Field& f = state.field;
  BoundaryReport rep;
  rep.converged = true;

  auto account = [&](const ColumnSolve& cs) {
    rep.converged = rep.converged && cs.converged;
    rep.monotone = rep.monotone && cs.monotone;
    rep.max_residual = std::max(rep.max_residual, std::abs(cs.residual));
    rep.max_iterations = std::max(rep.max_iterations, cs.iterations);
  };

  if (g.dim() == 1) {
    const int n = g.n1();
    const double d2 = 2.0 * g.delta();
    {
      const Eigen::Vector2d p0(f.v(1, 0) / d2, 0.0), w(-1.0 / d2, 0.0);
      const ColumnSolve cs =
          solve_ghost(target, p0, w, f.ghost(0), ctl.tol_b, ctl.boundary_max_iter);
      if (cs.converged) f.ghost(0) = cs.root;
      account(cs);
    }
    {
      const Eigen::Vector2d p0(-f.v(n - 1, 0) / d2, 0.0), w(1.0 / d2, 0.0);
      const ColumnSolve cs =
          solve_ghost(target, p0, w, f.ghost(1), ctl.tol_b, ctl.boundary_max_iter);
      if (cs.converged) f.ghost(1) = cs.root;
      account(cs);
    }
    state.bc_residual = rep.max_residual;
    return rep;
  }

  const int ns = g.ns();
  const double ds = g.ds();
  const Eigen::MatrixXd outer3 = g.D1() * f.v.rightCols(3);
  const Eigen::VectorXd uphi_face =
      (3.0 / 8.0) * outer3.col(0) - (5.0 / 4.0) * outer3.col(1) + (15.0 / 8.0) * outer3.col(2);
  for (int k = 0; k < g.nphi(); ++k) {
    const double base_us = -f.v(k, ns - 1) / ds;
    const Eigen::Vector2d p0(g.face_it11()(k) * base_us + g.face_it12()(k) * uphi_face(k),
                             g.face_it21()(k) * base_us + g.face_it22()(k) * uphi_face(k));
    const Eigen::Vector2d w(g.face_it11()(k) / ds, g.face_it21()(k) / ds);
    const ColumnSolve cs =
        solve_ghost(target, p0, w, f.ghost(k), ctl.tol_b, ctl.boundary_max_iter);
    if (cs.converged) f.ghost(k) = cs.root;
    account(cs);
  }
  state.bc_residual = rep.max_residual;
  return rep;
}

FlowState init_state(std::shared_ptr<const Grid> grid, const Generator& gen,
                     const std::optional<ConvexDomain>& omega_tilde, const StepControl& ctl) {
  ctl.validate();
  const int n = grid->dim();
  if (n == 1) {
    if (!(gen.A(0, 0) > 0.0)) throw std::invalid_argument("init: generator needs A > 0");
  } else {
    const Eigen::Vector2d ev = eigen_sym(gen.A, 2);
    if (std::abs(gen.A(0, 1) - gen.A(1, 0)) > 1e-13 * (1.0 + gen.A.norm()) || !(ev(0) > 0.0)) {
      throw std::invalid_argument("init: generator matrix A must be SPD");
    }
  }

  FlowState state;
  state.omega = grid->domain();
  state.omega_tilde =
      omega_tilde ? *omega_tilde : pushforward_quadratic(state.omega, gen.A, gen.b, gen.xc);
  if (state.omega_tilde.dim() != n) throw std::invalid_argument("init: domain dimensions differ");

  if (gen.kind == Generator::Kind::Perturbed) {
    if (!(gen.bump_width > 0.0)) throw std::invalid_argument("init: bump width must be positive");
    const int probes = 256;
    for (int i = 0; i < probes; ++i) {
      const double a = 2.0 * M_PI * i / probes;
      Eigen::Vector2d p = gen.bump_center;
      if (n == 1) {
        p.x() += gen.bump_width * ((i % 2 == 0) ? 1.0 : -1.0);
      } else {
        p += gen.bump_width * Eigen::Vector2d(std::cos(a), std::sin(a));
      }
      if (!(state.omega.h(p) > 0.0)) {
        throw std::invalid_argument("init: bump support must lie strictly inside the domain");
      }
      if (n == 1 && i >= 2) break;
    }
  }

  state.field = Field::sample(grid, [&](const Eigen::Vector2d& x) { return gen.value(x); });
  apply_mode_caps(state.field);

  const BoundaryReport brep = enforce_boundary(state, ctl);
  if (!brep.converged) {
    throw std::invalid_argument(
        "init: boundary projection failed; Du0(Omega) is not compatible with the target domain "
        "(max residual " + std::to_string(brep.max_residual) + ")");
  }
  if (brep.max_residual > ctl.tol_b) {
    throw std::invalid_argument("init: boundary residual above tolerance after projection");
  }

  const JetField jet = differentiate(state.field);
  const double lam1_min = jet.lam1.minCoeff();
  if (!(lam1_min > 0.0)) {
    throw std::invalid_argument("init: initial data is not strictly convex at all nodes "
                                "(min eigenvalue " + std::to_string(lam1_min) + ")");
  }
  state.theta0 = jet.F.maxCoeff();
  if (!(state.theta0 < n * M_PI / 2.0)) {
    throw std::invalid_argument("init: initial phase reaches n*pi/2");
  }
  state.osc_f0 = state.theta0 - jet.F.minCoeff();
  state.lam1_min0 = lam1_min;
  state.lam1_max0 = (n == 1) ? jet.lam1.maxCoeff() : jet.lam2.maxCoeff();

  const ObliquenessReport ob = obliqueness(state.omega_tilde, *grid, face_jet(state.field));
  if (!(ob.min_direct > 0.0)) {
    throw std::invalid_argument("init: strict obliqueness fails on the initial data");
  }
  state.oblique_min0 = ob.min_direct;
  state.dt_history.emplace_back(0, cfl_dt(*grid, ctl.sigma));
  return state;
}

namespace {

// Advance an accepted state whose jet is already current.  On success the
// jet buffers are left current for the new state (swapped with the trial).
StepResult advance_once(FlowState& state, const StepControl& ctl, FlowWorkspace& ws) {
  StepResult out;
  Field& f = state.field;
  const double dt_base = cfl_dt(*f.grid, ctl.sigma);

  ws.saved.v = f.v;
  ws.saved.ghost = f.ghost;
  for (int attempt = 0; attempt <= 10; ++attempt) {
    const double dt = dt_base * state.dt_scale;
    f.v += dt * ws.jet.F.matrix();
    apply_mode_caps(f);
    const BoundaryReport brep = enforce_boundary(state, ctl);
    bool ok = brep.converged;
    if (ok) {
      differentiate_into(f, ws.jet_trial);
      ok = ws.jet_trial.lam1.minCoeff() > 0.0;
    }
    if (ok) {
      f.t += dt;
      state.step += 1;
      state.bc_residual = brep.max_residual;
      std::swap(ws.jet, ws.jet_trial);
      out.accepted = true;
      out.halvings = attempt;
      out.dt = dt;
      return out;
    }
    f.v = ws.saved.v;
    f.ghost = ws.saved.ghost;
    state.dt_scale *= 0.5;
    state.dt_history.emplace_back(state.step, dt_base * state.dt_scale);
    out.halvings = attempt + 1;
  }
  out.diagnostic = "step rejected 10 times (convexity loss or boundary projection failure); "
                   "initial data and target domain are likely incompatible";
  return out;
}

}  // namespace

StepResult step(FlowState& state, const StepControl& ctl, FlowWorkspace& ws) {
  differentiate_into(state.field, ws.jet);
  return advance_once(state, ctl, ws);
}

RunResult run(FlowState& state, const StepControl& ctl, const RunOptions& opts) {
  RunResult res;
  const Grid& g = *state.field.grid;
  const double tol_mon = g.monitor_tol();
  FlowWorkspace ws;
  ws.saved = state.field;
  differentiate_into(state.field, ws.jet);

  double prev_max_f = std::numeric_limits<double>::infinity();
  double prev_min_f = -std::numeric_limits<double>::infinity();
  double last_dt = cfl_dt(g, ctl.sigma) * state.dt_scale;

  while (true) {
    face_jet_into(state.field, ws.face);
    const EstimateReport rep = estimate_report(state, ws.jet, ws.face, ws.himg, tol_mon);
    res.audit_ok = res.audit_ok && rep.all_pass();
    if (rep.f_max > prev_max_f + tol_mon || rep.f_min < prev_min_f - tol_mon) {
      res.monotone_osc = false;
    }
    prev_max_f = rep.f_max;
    prev_min_f = rep.f_min;

    const double mean_f = ws.jet.F.mean();
    const double osc = rep.f_max - rep.f_min;
    const double dev = std::max(rep.f_max - mean_f, mean_f - rep.f_min);
    state.c_estimate = mean_f;

    const bool sampled = (state.step % opts.monitor_every == 0);
    const bool done_conv = (osc <= ctl.tol_c && dev <= ctl.tol_c);
    const bool done_steps = (state.step >= ctl.max_steps);
    if (sampled || done_conv || done_steps) {
      res.rows.push_back({state.step, state.field.t, last_dt, rep.f_min, rep.f_max, osc,
                          rep.lam1_min, rep.lam1_max, rep.oblique_min_direct, rep.hess_min,
                          rep.hess_max, rep.bc_residual_max});
      if (opts.dump_hook) opts.dump_hook(state);
    }
    if (opts.snapshot_at_osc > 0.0 && !res.snapshot && osc <= opts.snapshot_at_osc) {
      res.snapshot = state.field;
    }
    if (done_conv) {
      state.converged = true;
      res.converged = true;
      break;
    }
    if (done_steps) {
      res.diagnostic = "maximum step count reached before convergence";
      break;
    }
    if (osc > 10.0 * state.osc_f0 + tol_mon) {
      res.diagnostic = "phase oscillation grew beyond 10x its initial value";
      break;
    }

    const StepResult sr = advance_once(state, ctl, ws);
    if (!sr.accepted) {
      res.diagnostic = sr.diagnostic;
      break;
    }
    last_dt = sr.dt;
  }
  res.steps = state.step;
  res.c = state.c_estimate;
  return res;
}

}  // namespace lagflow
