#include "lagflow/grid.hpp"

#include <complex>

namespace lagflow {

namespace {

// Trigonometric-interpolation derivative matrices, built from the DFT
// synthesis/analysis pair.  The Nyquist mode contributes 0 to the first
// derivative and -(n/2)^2 to the second, the standard symmetric choice.
void spectral_matrices(int n, Eigen::MatrixXd& d1, Eigen::MatrixXd& d2) {
  using cd = std::complex<double>;
  Eigen::MatrixXcd d1c = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd d2c = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      cd a1(0.0, 0.0), a2(0.0, 0.0);
      for (int m = -n / 2; m <= n / 2; ++m) {
        const double weight = (std::abs(m) == n / 2) ? 0.5 : 1.0;
        const cd em = std::exp(cd(0.0, m * 2.0 * M_PI * (k - l) / n));
        a1 += weight * cd(0.0, m) * em;
        a2 += weight * cd(-double(m) * m, 0.0) * em;
      }
      d1c(k, l) = a1 / double(n);
      d2c(k, l) = a2 / double(n);
    }
  }
  d1 = d1c.real();
  d2 = d2c.real();
}

Eigen::MatrixXd mode_projection(int n, int cap) {
  using cd = std::complex<double>;
  Eigen::MatrixXcd pc = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      cd a(0.0, 0.0);
      for (int m = -n / 2; m <= n / 2; ++m) {
        if (std::abs(m) > cap) continue;
        const double weight = (std::abs(m) == n / 2) ? 0.5 : 1.0;
        a += weight * std::exp(cd(0.0, m * 2.0 * M_PI * (k - l) / n));
      }
      pc(k, l) = a / double(n);
    }
  }
  return pc.real();
}

}  // namespace

std::shared_ptr<const Grid> Grid::make_1d(const ConvexDomain& domain, int n) {
  if (domain.dim() != 1) throw std::invalid_argument("grid: 1D grid needs an interval domain");
  if (n < kMin1D) throw std::invalid_argument("grid: 1D resolution below minimum (8)");
  auto g = std::shared_ptr<Grid>(new Grid());
  g->dim_ = 1;
  g->domain_ = domain;
  g->n1_ = n;
  g->delta_ = (domain.interval_b() - domain.interval_a()) / n;
  g->x1_ = Eigen::ArrayXd::LinSpaced(n + 1, domain.interval_a(), domain.interval_b());
  g->cfl_spacing_ = g->delta_;
  return g;
}

std::shared_ptr<const Grid> Grid::make_2d(const ConvexDomain& domain, int ns, int nphi) {
  if (domain.dim() != 2) throw std::invalid_argument("grid: 2D grid needs a disc or ellipse domain");
  if (ns < kMinRadial) throw std::invalid_argument("grid: radial resolution below minimum (8)");
  if (nphi < kMinAngular || nphi % 2 != 0) {
    throw std::invalid_argument("grid: angular resolution must be even and >= 16");
  }
  auto g = std::shared_ptr<Grid>(new Grid());
  g->dim_ = 2;
  g->domain_ = domain;
  g->ns_ = ns;
  g->nphi_ = nphi;
  g->ds_ = 1.0 / ns;
  g->dphi_ = 2.0 * M_PI / nphi;

  const Eigen::Vector2d c = domain.center();
  auto alloc = [&](Eigen::ArrayXXd& a) { a.setZero(nphi, ns); };
  alloc(g->X_); alloc(g->Y_);
  alloc(g->it11_); alloc(g->it12_); alloc(g->it21_); alloc(g->it22_);
  alloc(g->csf1_); alloc(g->csf2_); alloc(g->cff1_); alloc(g->cff2_);
  g->gx_.resize(nphi); g->gy_.resize(nphi);
  g->fx_.resize(nphi); g->fy_.resize(nphi);
  g->fnu1_.resize(nphi); g->fnu2_.resize(nphi);
  g->fit11_.resize(nphi); g->fit12_.resize(nphi); g->fit21_.resize(nphi); g->fit22_.resize(nphi);
  g->fcsf1_.resize(nphi); g->fcsf2_.resize(nphi); g->fcff1_.resize(nphi); g->fcff2_.resize(nphi);
  g->farc_.resize(nphi);

  for (int k = 0; k < nphi; ++k) {
    const double phi = g->phi(k);
    double rho, drho, ddrho;
    domain.rho_jet(phi, rho, drho, ddrho);
    const Eigen::Vector2d e(std::cos(phi), std::sin(phi));
    const Eigen::Vector2d ep(-e.y(), e.x());
    const Eigen::Vector2d xs = rho * e;                       // d x / d s
    const Eigen::Vector2d xsf = drho * e + rho * ep;          // d^2 x / ds dphi
    auto fill = [&](double s, double& i11, double& i12, double& i21, double& i22,
                    double& c1, double& c2, double& f1, double& f2) {
      const Eigen::Vector2d xf = s * xsf;                     // d x / d phi
      const Eigen::Vector2d xff = s * (ddrho * e + 2.0 * drho * ep - rho * e);
      const double det = xs.x() * xf.y() - xf.x() * xs.y();   // = s rho^2
      i11 = xf.y() / det;
      i12 = -xs.y() / det;
      i21 = -xf.x() / det;
      i22 = xs.x() / det;
      c1 = xsf.x();
      c2 = xsf.y();
      f1 = xff.x();
      f2 = xff.y();
    };
    for (int j = 0; j < ns; ++j) {
      const double s = g->s(j);
      const Eigen::Vector2d x = c + s * rho * e;
      g->X_(k, j) = x.x();
      g->Y_(k, j) = x.y();
      fill(s, g->it11_(k, j), g->it12_(k, j), g->it21_(k, j), g->it22_(k, j),
           g->csf1_(k, j), g->csf2_(k, j), g->cff1_(k, j), g->cff2_(k, j));
    }
    const double sg = 1.0 + 0.5 * g->ds_;
    g->gx_(k) = c.x() + sg * rho * e.x();
    g->gy_(k) = c.y() + sg * rho * e.y();

    const Eigen::Vector2d xb = c + rho * e;
    g->fx_(k) = xb.x();
    g->fy_(k) = xb.y();
    const Eigen::Vector2d nu = domain.grad_h(xb).normalized();
    g->fnu1_(k) = nu.x();
    g->fnu2_(k) = nu.y();
    fill(1.0, g->fit11_(k), g->fit12_(k), g->fit21_(k), g->fit22_(k),
         g->fcsf1_(k), g->fcsf2_(k), g->fcff1_(k), g->fcff2_(k));
    g->farc_(k) = std::sqrt(drho * drho + rho * rho);
  }

  spectral_matrices(nphi, g->D1_, g->D2_);

  // Azimuthal mode caps and the stability spacing.  A mode m on a ring of
  // radius r acts like a one-dimensional grid of spacing 2r/m, so the cap
  // max(2, 2j+1) pins the capped rings at the radial spacing while keeping
  // every quadratic exactly representable.
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(domain.shape_matrix());
  const double rho_min = 1.0 / std::sqrt(es.eigenvalues().maxCoeff());
  const double hr = g->ds_ * rho_min;
  double spacing = hr;
  g->mode_cap_.resize(ns);
  for (int j = 0; j < ns; ++j) {
    const int cap = std::min(nphi / 2, std::max(2, 2 * j + 1));
    g->mode_cap_[j] = cap;
    spacing = std::min(spacing, 2.0 * g->s(j) * rho_min / cap);
    if (cap < nphi / 2) g->filters_.emplace_back(j, mode_projection(nphi, cap));
  }
  g->cfl_spacing_ = spacing;
  return g;
}

bool Grid::locate(const Eigen::Vector2d& p, double& js, double& kf) const {
  const Eigen::Vector2d d = p - domain_.center();
  const double r = d.norm();
  double phi = std::atan2(d.y(), d.x());
  if (phi < 0.0) phi += 2.0 * M_PI;
  kf = phi / dphi_;
  const double s = (r == 0.0) ? 0.0 : r / domain_.rho(phi);
  js = s / ds_ - 0.5;
  return js >= 0.0 && js <= ns_ - 1.0;
}

double Grid::interpolate(const Eigen::ArrayXXd& a, double js, double kf) const {
  const int j0 = std::min(ns_ - 2, std::max(0, int(std::floor(js))));
  const double tj = js - j0;
  const int k0 = int(std::floor(kf)) % nphi_;
  const double tk = kf - std::floor(kf);
  const int k1 = (k0 + 1) % nphi_;
  const double v0 = (1.0 - tk) * a(k0, j0) + tk * a(k1, j0);
  const double v1 = (1.0 - tk) * a(k0, j0 + 1) + tk * a(k1, j0 + 1);
  return (1.0 - tj) * v0 + tj * v1;
}

}  // namespace lagflow
