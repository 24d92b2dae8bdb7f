#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>

#include "lagflow/grid.hpp"

namespace lagflow {

/// Scalar potential sampled on a grid, plus ghost values.
///
/// 1D: `v` is an (n+1) x 1 column, `ghost` holds the two ghost-node values
/// (0 = left, 1 = right).  2D: `v` is (nphi x ns), one column per ring, and
/// `ghost` holds the outer ghost ring.
struct Field {
  std::shared_ptr<const Grid> grid;
  Eigen::MatrixXd v;
  Eigen::ArrayXd ghost;
  double t = 0.0;

  Field() = default;
  explicit Field(std::shared_ptr<const Grid> g);

  int dim() const { return grid->dim(); }

  /// Sample an analytic function at all nodes and at the ghost nodes.
  static Field sample(std::shared_ptr<const Grid> g,
                      const std::function<double(const Eigen::Vector2d&)>& f, double t = 0.0);

  /// Fill ghosts by one-sided cubic extrapolation of the interior values;
  /// used for derived fields that carry no boundary condition of their own.
  void extrapolate_ghost();
};

/// Text field dump: header "n t <counts...>", then one node per line
/// "index coords value".  Lossless round-trip (17 significant digits).
void write_field(std::ostream& os, const Field& f);
void write_field(const std::string& path, const Field& f);

/// Read a dump written by write_field onto an existing grid.  Throws when
/// the header or node coordinates do not match the grid.
Field read_field(std::istream& is, std::shared_ptr<const Grid> g);
Field read_field(const std::string& path, std::shared_ptr<const Grid> g);

}  // namespace lagflow
