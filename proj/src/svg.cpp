#include "lagflow/svg.hpp"

#include <fstream>
#include <iomanip>
#include <vector>

namespace lagflow {

namespace {

struct Segment {
  double x0, y0, x1, y1;
};

// Zero-level crossings of a quad cell, linear interpolation along edges.
void march_cell(const double val[4], const double px[4], const double py[4], double level,
                std::vector<Segment>& out) {
  double cx[4], cy[4];
  int hits = 0;
  int edge_of[4];
  for (int e = 0; e < 4; ++e) {
    const int a = e, b = (e + 1) % 4;
    const double fa = val[a] - level, fb = val[b] - level;
    if ((fa > 0.0) == (fb > 0.0)) continue;
    if (fa == fb) continue;
    const double t = fa / (fa - fb);
    cx[hits] = px[a] + t * (px[b] - px[a]);
    cy[hits] = py[a] + t * (py[b] - py[a]);
    edge_of[hits] = e;
    ++hits;
    if (hits == 4) break;
  }
  if (hits == 2) {
    out.push_back({cx[0], cy[0], cx[1], cy[1]});
  } else if (hits == 4) {
    // saddle: pair by the cell-center sign
    const double center = 0.25 * (val[0] + val[1] + val[2] + val[3]) - level;
    const bool first_pos = (val[edge_of[0]] - level) > 0.0;
    if ((center > 0.0) == first_pos) {
      out.push_back({cx[0], cy[0], cx[3], cy[3]});
      out.push_back({cx[1], cy[1], cx[2], cy[2]});
    } else {
      out.push_back({cx[0], cy[0], cx[1], cy[1]});
      out.push_back({cx[2], cy[2], cx[3], cy[3]});
    }
  }
}

std::vector<std::vector<Segment>> contour_levels(const Grid& g, const Eigen::ArrayXXd& a) {
  const double lo = a.minCoeff(), hi = a.maxCoeff();
  std::vector<std::vector<Segment>> levels(10);
  if (!(hi > lo)) return levels;
  for (int i = 0; i < 10; ++i) {
    const double level = lo + (i + 1) * (hi - lo) / 11.0;
    for (int j = 0; j + 1 < g.ns(); ++j) {
      for (int k = 0; k < g.nphi(); ++k) {
        const int k2 = (k + 1) % g.nphi();
        const double val[4] = {a(k, j), a(k2, j), a(k2, j + 1), a(k, j + 1)};
        const double px[4] = {g.X()(k, j), g.X()(k2, j), g.X()(k2, j + 1), g.X()(k, j + 1)};
        const double py[4] = {g.Y()(k, j), g.Y()(k2, j), g.Y()(k2, j + 1), g.Y()(k, j + 1)};
        march_cell(val, px, py, level, levels[i]);
      }
    }
  }
  return levels;
}

}  // namespace

void write_contour_svg(const std::string& path, const Field& f, const JetField& jet) {
  const Grid& g = *f.grid;
  if (g.dim() != 2) throw std::invalid_argument("svg: contour rendering needs a 2D grid");
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write svg: " + path);

  const double xmin = g.face_X().minCoeff(), xmax = g.face_X().maxCoeff();
  const double ymin = g.face_Y().minCoeff(), ymax = g.face_Y().maxCoeff();
  const double span = std::max(xmax - xmin, ymax - ymin);
  const double panel = 420.0, margin = 20.0;
  const double scale = (panel - 2.0 * margin) / span;

  auto mapx = [&](double x, int p) { return p * panel + margin + (x - xmin) * scale; };
  auto mapy = [&](double y) { return panel - margin - (y - ymin) * scale; };

  os << std::setprecision(8);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << 2 * panel << "\" height=\""
     << panel << "\" viewBox=\"0 0 " << 2 * panel << ' ' << panel << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  const char* titles[2] = {"u", "F"};
  const Eigen::ArrayXXd* panels[2] = {nullptr, &jet.F};
  const Eigen::ArrayXXd uvals = f.v.array();
  panels[0] = &uvals;

  for (int p = 0; p < 2; ++p) {
    os << "<polygon points=\"";
    for (int k = 0; k < g.nphi(); ++k) {
      os << mapx(g.face_X()(k), p) << ',' << mapy(g.face_Y()(k)) << ' ';
    }
    os << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.2\"/>\n";
    const auto levels = contour_levels(g, *panels[p]);
    for (size_t i = 0; i < levels.size(); ++i) {
      if (levels[i].empty()) continue;
      const int shade = 30 + int(20 * i);
      os << "<path d=\"";
      for (const auto& s : levels[i]) {
        os << 'M' << mapx(s.x0, p) << ' ' << mapy(s.y0) << 'L' << mapx(s.x1, p) << ' '
           << mapy(s.y1);
      }
      os << "\" fill=\"none\" stroke=\"rgb(" << shade << ',' << shade << ",200)\" "
         << "stroke-width=\"1\"/>\n";
    }
    os << "<text x=\"" << p * panel + margin << "\" y=\"" << margin - 4
       << "\" font-family=\"monospace\" font-size=\"14\">" << titles[p] << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace lagflow
