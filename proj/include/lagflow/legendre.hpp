#pragma once

#include "lagflow/jet.hpp"

namespace lagflow {

/// Convex conjugate u*(y) = max_x (<x,y> - u(x)) sampled on a grid over the
/// gradient-image domain.
struct DualField {
  Field field;
  int extrapolated = 0;  // dual nodes whose argmax sat on the source boundary ring
                         // with the refinement stepping outside the source domain
};

/// Discrete conjugate: grid argmax refined by one local quadratic correction
/// using the source jet at the argmax node,
///   u*(y) = <x,y> - u(x) + 1/2 (y - Du)^T (D^2u)^{-1} (y - Du).
/// Exact (to rounding) for quadratic u.  Requires strictly convex data.
DualField legendre_transform(const Field& u, const JetField& jet,
                             std::shared_ptr<const Grid> dual_grid);
DualField legendre_transform(const Field& u, std::shared_ptr<const Grid> dual_grid);

struct HessianInverseReport {
  double max_discrepancy = 0.0;
  int sampled = 0;
  int skipped = 0;  // source nodes whose gradient lands outside the dual grid
};

/// Max-norm discrepancy of D^2u*(Du(x)) * D^2u(x) - I over the source nodes,
/// the dual Hessian interpolated on the dual grid.
HessianInverseReport hessian_inverse_check(const Field& u, const DualField& dual);

struct DualFlowReport {
  double max_residual = 0.0;
  int sampled = 0;
};

/// Residual of the conjugate evolution law du*/dt - F(D^2u*) = -n pi/2
/// between two time slices of the same dual grid: the time derivative by
/// differencing, F(D^2u*) averaged over the two slices, max over dual nodes
/// away from the outer ring.
DualFlowReport dual_flow_residual(const DualField& a, const DualField& b);

}  // namespace lagflow
