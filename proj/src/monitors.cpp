#include "lagflow/monitors.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace lagflow {

namespace {

// Interior nodes keep a genuine margin inside the target domain; the
// confinement flag only needs to absorb rounding.
constexpr double kConfinementTol = 1e-12;
constexpr double kTangentialTol = 1e-6;

}  // namespace

ObliquenessReport obliqueness(const ConvexDomain& omega_tilde, const Grid& grid,
                              const FaceJet& face) {
  ObliquenessReport rep;
  rep.min_direct = std::numeric_limits<double>::infinity();
  rep.min_identity = std::numeric_limits<double>::infinity();
  const int n = grid.dim();
  const int count = (n == 1) ? 2 : grid.nphi();
  for (int k = 0; k < count; ++k) {
    Eigen::Vector2d nu, du;
    Eigen::Matrix2d H = Eigen::Matrix2d::Zero();
    if (n == 1) {
      nu = {k == 0 ? 1.0 : -1.0, 0.0};
      du = {face.ux(k), 0.0};
      H(0, 0) = face.hxx(k);
    } else {
      nu = {grid.face_nu1()(k), grid.face_nu2()(k)};
      du = {face.ux(k), face.uy(k)};
      H << face.hxx(k), face.hxy(k), face.hxy(k), face.hyy(k);
    }
    const Eigen::Vector2d beta = omega_tilde.grad_h(du);
    const double direct = beta.dot(nu);
    rep.min_direct = std::min(rep.min_direct, direct);

    const Eigen::Vector2d lam = eigen_sym(H, n);
    if (!(lam(0) > 0.0)) {
      rep.hessian_ok = false;
      continue;
    }
    double qn, qb;
    if (n == 1) {
      qn = 1.0 / H(0, 0);
      qb = beta.x() * beta.x() * H(0, 0);
    } else {
      qn = nu.dot(H.inverse() * nu);
      qb = beta.dot(H * beta);
    }
    const double identity = std::sqrt(qn * qb);
    rep.min_identity = std::min(rep.min_identity, identity);
    rep.max_discrepancy = std::max(rep.max_discrepancy, std::abs(direct - identity));
  }
  return rep;
}

ObliquenessReport obliqueness(const FlowState& state) {
  return obliqueness(state.omega_tilde, *state.field.grid, face_jet(state.field));
}

double boundary_tangential_check(const ConvexDomain& omega_tilde, const Grid& grid,
                                 const FaceJet& face) {
  if (grid.dim() == 1) return 0.0;
  const int m = grid.nphi();
  Eigen::ArrayXd hval(m);
  for (int k = 0; k < m; ++k) {
    hval(k) = omega_tilde.h({face.ux(k), face.uy(k)});
  }
  double worst = 0.0;
  for (int k = 0; k < m; ++k) {
    const double d = (hval((k + 1) % m) - hval((k + m - 1) % m)) /
                     (2.0 * grid.dphi() * grid.face_arc()(k));
    worst = std::max(worst, std::abs(d));
  }
  return worst;
}

double boundary_tangential_check(const FlowState& state) {
  return boundary_tangential_check(state.omega_tilde, *state.field.grid, face_jet(state.field));
}

EstimateReport estimate_report(const FlowState& state, const JetField& jet, const FaceJet& face,
                               Eigen::ArrayXXd& himg_scratch, double tol_mon) {
  const Grid& g = *state.field.grid;
  const int n = g.dim();
  EstimateReport r;
  r.t = state.field.t;
  r.tol = tol_mon;
  r.theta0 = state.theta0;

  r.f_min = jet.F.minCoeff();
  r.f_max = jet.F.maxCoeff();
  r.pass_phase = (r.f_min >= -tol_mon) && (r.f_max <= r.theta0 + tol_mon);

  r.lam1_min = jet.lam1.minCoeff();
  r.lam1_max = jet.lam1.maxCoeff();
  r.tan_bound = std::tan(r.theta0 / n);
  r.pass_lambda1 = r.lam1_max <= r.tan_bound + tol_mon;
  r.pass_convex = r.lam1_min > 0.0;

  Eigen::ArrayXXd trace = 1.0 / (1.0 + jet.lam1.square());
  if (n == 2) trace += 1.0 / (1.0 + jet.lam2.square());
  r.trace_min = trace.minCoeff();
  r.trace_max = trace.maxCoeff();
  r.trace_lower = 1.0 / (1.0 + r.tan_bound * r.tan_bound);
  r.pass_trace = (r.trace_min >= r.trace_lower - tol_mon) && (r.trace_max <= n + tol_mon);

  gradient_image_h(jet, state.omega_tilde, himg_scratch);
  r.himg_min = himg_scratch.minCoeff();
  r.pass_confinement = r.himg_min >= -kConfinementTol;

  const ObliquenessReport ob = obliqueness(state.omega_tilde, g, face);
  r.oblique_min_direct = ob.min_direct;
  r.oblique_min_identity = ob.min_identity;
  r.oblique_discrepancy = ob.max_discrepancy;
  r.pass_oblique = ob.hessian_ok && ob.min_direct > 0.0 &&
                   ob.min_direct >= 0.5 * state.oblique_min0;
  r.pass_identity = ob.hessian_ok && ob.max_discrepancy <= 1e-6 + 2.0 * g.cfl_spacing();

  r.hess_min = r.lam1_min;
  r.hess_max = (n == 1) ? r.lam1_max : jet.lam2.maxCoeff();
  r.pass_hess_range =
      (r.hess_min >= 0.5 * state.lam1_min0) && (r.hess_max <= 2.0 * state.lam1_max0 + tol_mon);

  r.tangential_max = boundary_tangential_check(state.omega_tilde, g, face);
  r.pass_tangential = r.tangential_max <= kTangentialTol;

  r.bc_residual_max = state.bc_residual;
  return r;
}

EstimateReport estimate_report(const FlowState& state, double tol_mon) {
  const JetField jet = differentiate(state.field);
  const FaceJet face = face_jet(state.field);
  Eigen::ArrayXXd himg;
  return estimate_report(state, jet, face, himg, tol_mon);
}

void write_monitors_csv(const std::string& path, const FlowState& state,
                        const std::vector<MonitorRow>& rows) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write monitors csv: " + path);
  os << std::setprecision(17);
  const Grid& g = *state.field.grid;
  os << "# lagflow-monitors n=" << g.dim() << " theta0=" << state.theta0
     << " tan_bound=" << std::tan(state.theta0 / g.dim()) << " tol_mon=" << g.monitor_tol()
     << " oblique_min0=" << state.oblique_min0 << " lam1_min0=" << state.lam1_min0
     << " lam1_max0=" << state.lam1_max0 << "\n";
  os << "step,t,dt,minF,maxF,oscF,lambda1_min,lambda1_max,oblique_min,hess_min,hess_max,"
        "bc_residual_max\n";
  for (const auto& r : rows) {
    os << r.step << ',' << r.t << ',' << r.dt << ',' << r.min_f << ',' << r.max_f << ','
       << r.osc_f << ',' << r.lambda1_min << ',' << r.lambda1_max << ',' << r.oblique_min << ','
       << r.hess_min << ',' << r.hess_max << ',' << r.bc_residual_max << '\n';
  }
}

ReplayResult replay_monitors_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read monitors csv: " + path);
  ReplayResult out;
  std::string line;
  double theta0 = 0.0, tan_bound = 0.0, tol_mon = 0.0;
  double oblique0 = 0.0, lam1_min0 = 0.0, lam1_max0 = 0.0;
  bool have_header = false;
  double prev_max = std::numeric_limits<double>::infinity();
  double prev_min = -std::numeric_limits<double>::infinity();
  auto fail = [&](long row, const std::string& what) {
    out.all_pass = false;
    out.violations.push_back("row " + std::to_string(row) + ": " + what);
  };
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ss(line.substr(1));
      std::string tok;
      while (ss >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq);
        const double val = std::stod(tok.substr(eq + 1));
        if (key == "theta0") theta0 = val;
        else if (key == "tan_bound") tan_bound = val;
        else if (key == "tol_mon") tol_mon = val;
        else if (key == "oblique_min0") oblique0 = val;
        else if (key == "lam1_min0") lam1_min0 = val;
        else if (key == "lam1_max0") lam1_max0 = val;
      }
      have_header = true;
      continue;
    }
    if (line.rfind("step,", 0) == 0) continue;
    if (!have_header) throw std::runtime_error("monitors csv: missing constants header");
    std::array<double, 12> f{};
    std::istringstream ss(line);
    std::string cell;
    for (int i = 0; i < 12; ++i) {
      if (!std::getline(ss, cell, ',')) throw std::runtime_error("monitors csv: short row");
      f[i] = std::stod(cell);
    }
    const long row = out.rows++;
    const double min_f = f[3], max_f = f[4];
    const double lam1_min = f[6], lam1_max = f[7], oblique = f[8], hess_max = f[10];
    if (min_f < -tol_mon) fail(row, "phase lower bound");
    if (max_f > theta0 + tol_mon) fail(row, "phase upper bound");
    if (lam1_max > tan_bound + tol_mon) fail(row, "eigenvalue bound");
    if (!(lam1_min > 0.0)) fail(row, "convexity");
    if (lam1_min < 0.5 * lam1_min0) fail(row, "hessian degeneracy");
    if (hess_max > 2.0 * lam1_max0 + tol_mon) fail(row, "hessian growth");
    if (!(oblique > 0.0) || oblique < 0.5 * oblique0) fail(row, "obliqueness");
    if (max_f > prev_max + tol_mon) fail(row, "max F increased");
    if (min_f < prev_min - tol_mon) fail(row, "min F decreased");
    prev_max = max_f;
    prev_min = min_f;
  }
  return out;
}

}  // namespace lagflow
