#pragma once

#include "lagflow/flow.hpp"

namespace lagflow {

/// Solution of the steady problem F(D^2 u) = c in Omega, h(Du) = 0 on the
/// boundary, normalized by u(anchor) = 0.
struct SteadySolution {
  Field field;
  double c = 0.0;
  int iterations = 0;
  bool converged = false;
  double residual_interior = 0.0;
  double residual_boundary = 0.0;
  double residual_anchor = 0.0;
  std::vector<double> residual_history;  // ||R||_2 after each accepted iteration
};

/// 1D closed form for (a,b) -> (ta,tb): u(x) = 1/2 k (x-a)^2 + ta (x-a) with
/// k = (tb-ta)/(b-a) and c = arctan k; u(a) = 0.
struct ClosedForm1D {
  double a = 0.0, ta = 0.0, k = 1.0, c = 0.0;
  double value(double x) const { return 0.5 * k * (x - a) * (x - a) + ta * (x - a); }
  double grad(double x) const { return k * (x - a) + ta; }
};
ClosedForm1D steady_1d_closed_form(double a, double b, double ta, double tb);

/// Same closed form sampled onto a grid as a SteadySolution.
SteadySolution steady_1d_closed_form(std::shared_ptr<const Grid> grid, double ta, double tb);

/// Damped Newton on the augmented system: unknowns are the node values
/// (plus the ghost ring in 2D) and the constant c; equations are
/// F(D^2 u) - c = 0 at the nodes, h(Du) = 0 at the boundary (one-sided
/// stencils through the ghost in 2D, interior-only one-sided stencils in 1D)
/// and u(anchor) = 0.  Line search halves the step until the residual norm
/// decreases and convexity is kept.
SteadySolution solve_steady(std::shared_ptr<const Grid> grid, const ConvexDomain& omega_tilde,
                            const Field& initial_guess, double tol_s = 1e-10, int max_iter = 50);

struct FlowSteadyGap {
  double grad_gap = 0.0;  // sup |Du_flow - Du_steady| over interior nodes
  double c_gap = 0.0;
};

FlowSteadyGap compare_flow_vs_steady(const FlowState& flow_final, const SteadySolution& steady);

}  // namespace lagflow
