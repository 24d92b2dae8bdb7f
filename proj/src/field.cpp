#include "lagflow/field.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace lagflow {

Field::Field(std::shared_ptr<const Grid> g) : grid(std::move(g)) {
  if (grid->dim() == 1) {
    v.setZero(grid->n1() + 1, 1);
    ghost.setZero(2);
  } else {
    v.setZero(grid->nphi(), grid->ns());
    ghost.setZero(grid->nphi());
  }
}

Field Field::sample(std::shared_ptr<const Grid> g,
                    const std::function<double(const Eigen::Vector2d&)>& f, double t) {
  Field out(g);
  out.t = t;
  if (g->dim() == 1) {
    for (int j = 0; j <= g->n1(); ++j) out.v(j, 0) = f({g->x1()(j), 0.0});
    out.ghost(0) = f({g->ghost_x(false), 0.0});
    out.ghost(1) = f({g->ghost_x(true), 0.0});
  } else {
    for (int j = 0; j < g->ns(); ++j)
      for (int k = 0; k < g->nphi(); ++k) out.v(k, j) = f({g->X()(k, j), g->Y()(k, j)});
    for (int k = 0; k < g->nphi(); ++k) out.ghost(k) = f({g->ghost_X()(k), g->ghost_Y()(k)});
  }
  return out;
}

void Field::extrapolate_ghost() {
  if (grid->dim() == 1) {
    const int n = grid->n1();
    ghost(0) = 4.0 * v(0, 0) - 6.0 * v(1, 0) + 4.0 * v(2, 0) - v(3, 0);
    ghost(1) = 4.0 * v(n, 0) - 6.0 * v(n - 1, 0) + 4.0 * v(n - 2, 0) - v(n - 3, 0);
  } else {
    const int m = grid->ns() - 1;
    ghost = 4.0 * v.col(m).array() - 6.0 * v.col(m - 1).array() + 4.0 * v.col(m - 2).array() -
            v.col(m - 3).array();
  }
}

void write_field(std::ostream& os, const Field& f) {
  os << std::setprecision(17);
  const auto& g = *f.grid;
  if (g.dim() == 1) {
    os << 1 << ' ' << f.t << ' ' << g.n1() + 1 << '\n';
    for (int j = 0; j <= g.n1(); ++j) os << j << ' ' << g.x1()(j) << ' ' << f.v(j, 0) << '\n';
  } else {
    os << 2 << ' ' << f.t << ' ' << g.ns() << ' ' << g.nphi() << '\n';
    for (int j = 0; j < g.ns(); ++j)
      for (int k = 0; k < g.nphi(); ++k) {
        os << j * g.nphi() + k << ' ' << g.X()(k, j) << ' ' << g.Y()(k, j) << ' ' << f.v(k, j)
           << '\n';
      }
  }
}

void write_field(const std::string& path, const Field& f) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write field dump: " + path);
  write_field(os, f);
}

Field read_field(std::istream& is, std::shared_ptr<const Grid> g) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("field dump: empty input");
  std::istringstream head(line);
  int dim = 0;
  double t = 0.0;
  head >> dim >> t;
  if (dim != g->dim()) throw std::runtime_error("field dump: dimension mismatch");
  Field out(g);
  out.t = t;
  auto check_coord = [](double a, double b) {
    if (std::abs(a - b) > 1e-9 * (1.0 + std::abs(b))) {
      throw std::runtime_error("field dump: node coordinates do not match the grid");
    }
  };
  if (dim == 1) {
    int count = 0;
    head >> count;
    if (count != g->n1() + 1) throw std::runtime_error("field dump: node count mismatch");
    for (int j = 0; j <= g->n1(); ++j) {
      int idx;
      double x, u;
      if (!(is >> idx >> x >> u)) throw std::runtime_error("field dump: truncated");
      check_coord(x, g->x1()(idx));
      out.v(idx, 0) = u;
    }
  } else {
    int ns = 0, nphi = 0;
    head >> ns >> nphi;
    if (ns != g->ns() || nphi != g->nphi()) throw std::runtime_error("field dump: size mismatch");
    for (int i = 0; i < ns * nphi; ++i) {
      int idx;
      double x, y, u;
      if (!(is >> idx >> x >> y >> u)) throw std::runtime_error("field dump: truncated");
      const int j = idx / nphi, k = idx % nphi;
      check_coord(x, g->X()(k, j));
      check_coord(y, g->Y()(k, j));
      out.v(k, j) = u;
    }
  }
  out.extrapolate_ghost();
  return out;
}

Field read_field(const std::string& path, std::shared_ptr<const Grid> g) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read field dump: " + path);
  return read_field(is, std::move(g));
}

}  // namespace lagflow
