#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lagflow/jet.hpp"

namespace lagflow {

/// Initial potential: u0 = 1/2 (x-xc)^T A (x-xc) + b.x (+ eps * bump), with a
/// compactly supported smooth bump of radius `bump_width` about `bump_center`.
struct Generator {
  enum class Kind { Quadratic, Perturbed };
  Kind kind = Kind::Quadratic;
  Eigen::Matrix2d A = Eigen::Matrix2d::Identity();  // 1D uses A(0,0)
  Eigen::Vector2d b = Eigen::Vector2d::Zero();
  Eigen::Vector2d xc = Eigen::Vector2d::Zero();
  double eps = 0.0;
  Eigen::Vector2d bump_center = Eigen::Vector2d::Zero();
  double bump_width = 0.25;

  double value(const Eigen::Vector2d& x) const;
};

/// Smooth compactly supported bump, exp(1 - 1/(1-z^2)) for |z| < 1.
double bump(double z);

struct StepControl {
  double sigma = 0.5;        // CFL safety factor, in (0, 1]
  double tol_c = 1e-6;       // convergence tolerance on osc F
  double tol_b = 1e-12;      // boundary Newton tolerance
  int boundary_max_iter = 50;
  long max_steps = 5000000;

  void validate() const;
};

struct BoundaryReport {
  bool converged = false;
  bool monotone = true;      // dr/dghost kept its obliqueness-dictated sign
  double max_residual = 0.0;
  int max_iterations = 0;
};

struct FlowState {
  Field field;
  ConvexDomain omega, omega_tilde;
  double theta0 = 0.0;       // max F over the initial data
  long step = 0;
  double dt_scale = 1.0;     // persistent halving factor
  std::vector<std::pair<long, double>> dt_history;
  bool converged = false;
  double c_estimate = 0.0;
  double bc_residual = 0.0;  // after the last projection

  // baselines recorded at t = 0 for the degeneracy audits
  double osc_f0 = 0.0;
  double oblique_min0 = 0.0;
  double lam1_min0 = 0.0;
  double lam1_max0 = 0.0;

  int dim() const { return field.grid->dim(); }
};

/// Explicit step size sigma * spacing^2 / (2n).
double cfl_dt(const Grid& grid, double sigma);

/// Strictly convex compatible initial state: samples the generator, applies
/// the ring mode caps, projects the ghosts onto h(Du) = 0 and records the
/// audit baselines.  Throws on non-convex data, on a bump that is not
/// compactly supported strictly inside the domain, and on initial data whose
/// boundary projection fails or leaves |h(Du)| above tol_b.
FlowState init_state(std::shared_ptr<const Grid> grid, const Generator& gen,
                     const std::optional<ConvexDomain>& omega_tilde, const StepControl& ctl);

/// Ghost projection: per boundary column, solve h(Du(face)) = 0 for the ghost
/// value by safeguarded Newton (bisection fallback).  The face gradient uses
/// the one-sided radial difference through the ghost, so each column is an
/// independent scalar equation, strictly monotone under strict obliqueness.
BoundaryReport enforce_boundary(FlowState& state, const StepControl& ctl);

struct FlowWorkspace {
  JetField jet, jet_trial;
  Field saved;
  Eigen::ArrayXXd himg;
  FaceJet face;
};

struct StepResult {
  bool accepted = false;
  int halvings = 0;
  double dt = 0.0;
  std::string diagnostic;
};

/// One explicit step: u += dt F(D^2 u) at every node, ring mode caps, ghost
/// projection.  On convexity loss or projection failure the step is undone,
/// dt is halved (persistently) and retried, at most 10 times.
StepResult step(FlowState& state, const StepControl& ctl, FlowWorkspace& ws);

struct MonitorRow {
  long step = 0;
  double t = 0.0, dt = 0.0;
  double min_f = 0.0, max_f = 0.0, osc_f = 0.0;
  double lambda1_min = 0.0, lambda1_max = 0.0;
  double oblique_min = 0.0;
  double hess_min = 0.0, hess_max = 0.0;
  double bc_residual_max = 0.0;
};

struct RunOptions {
  long monitor_every = 100;          // cadence of recorded monitor rows
  double snapshot_at_osc = -1.0;     // capture the field when osc F first drops below
  std::function<void(const FlowState&)> dump_hook;  // called at the monitor cadence
};

struct RunResult {
  bool converged = false;
  long steps = 0;
  double c = 0.0;
  bool audit_ok = true;      // every estimate flag on every accepted step
  bool monotone_osc = true;  // max F non-increasing, min F non-decreasing
  std::string diagnostic;
  std::vector<MonitorRow> rows;
  std::optional<Field> snapshot;
};

/// Iterate `step` until the phase is spatially constant to tol_c (both the
/// oscillation and the deviation from the mean), auditing every estimate on
/// every accepted step.  Returns c = spatial mean of F on the final slice.
RunResult run(FlowState& state, const StepControl& ctl, const RunOptions& opts = {});

}  // namespace lagflow
