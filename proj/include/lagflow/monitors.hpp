#pragma once

#include "lagflow/flow.hpp"

namespace lagflow {

/// Pass/fail audit of the maximum-principle estimates on one time slice:
/// phase bounds 0 <= F <= Theta0, the smallest-eigenvalue bound
/// lambda_1 <= tan(Theta0/n), the trace bounds of g = (I + H^2)^{-1},
/// convexity, gradient-image confinement h(Du) >= -tol_b, strict obliqueness
/// (direct <beta,nu> and the boundary identity
/// <beta,nu> = sqrt(nu^T H^{-1} nu * beta^T H beta)), the empirical Hessian
/// pinching and the tangential derivative of h(Du) along the boundary.
struct EstimateReport {
  double t = 0.0;
  double tol = 0.0;

  double f_min = 0.0, f_max = 0.0, theta0 = 0.0;
  bool pass_phase = false;

  double lam1_min = 0.0, lam1_max = 0.0, tan_bound = 0.0;
  bool pass_lambda1 = false;
  bool pass_convex = false;

  double trace_min = 0.0, trace_max = 0.0, trace_lower = 0.0;
  bool pass_trace = false;

  double himg_min = 0.0;
  bool pass_confinement = false;

  double oblique_min_direct = 0.0, oblique_min_identity = 0.0, oblique_discrepancy = 0.0;
  bool pass_oblique = false;
  bool pass_identity = false;

  double hess_min = 0.0, hess_max = 0.0;
  bool pass_hess_range = false;

  double tangential_max = 0.0;  // 2D only; 0 in 1D
  bool pass_tangential = false;

  double bc_residual_max = 0.0;

  bool all_pass() const {
    return pass_phase && pass_lambda1 && pass_convex && pass_trace && pass_confinement &&
           pass_oblique && pass_identity && pass_hess_range && pass_tangential;
  }
};

struct ObliquenessReport {
  double min_direct = 0.0;
  double min_identity = 0.0;
  double max_discrepancy = 0.0;
  bool hessian_ok = true;  // boundary Hessians stayed positive definite
};

/// Direct <beta,nu> = h_p(Du).nu per boundary face versus the identity value
/// sqrt(nu^T (D^2u)^{-1} nu * h_p^T (D^2u) h_p), with one-sided boundary
/// Hessians.
ObliquenessReport obliqueness(const FlowState& state);
ObliquenessReport obliqueness(const ConvexDomain& omega_tilde, const Grid& grid,
                              const FaceJet& face);

/// Max |d/dtau h(Du)| along the boundary ring (2D; returns 0 in 1D).
double boundary_tangential_check(const FlowState& state);
double boundary_tangential_check(const ConvexDomain& omega_tilde, const Grid& grid,
                                 const FaceJet& face);

/// Full audit of one slice.  The overload taking jets avoids recomputation
/// inside the stepping loop.
EstimateReport estimate_report(const FlowState& state, double tol_mon);
EstimateReport estimate_report(const FlowState& state, const JetField& jet, const FaceJet& face,
                               Eigen::ArrayXXd& himg_scratch, double tol_mon);

/// monitors.csv: a comment header with the run constants, a column header,
/// then one row per sampled step (17 significant digits, stable layout).
void write_monitors_csv(const std::string& path, const FlowState& state,
                        const std::vector<MonitorRow>& rows);

struct ReplayResult {
  bool all_pass = true;
  long rows = 0;
  std::vector<std::string> violations;
};

/// Re-evaluate the row-level monitor flags from a monitors.csv file:
/// phase/eigenvalue/trace bounds per row against the header constants, and
/// oscillation monotonicity across consecutive rows.
ReplayResult replay_monitors_csv(const std::string& path);

}  // namespace lagflow
