#include "lagflow/runner.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include <nlohmann/json.hpp>

#include "lagflow/legendre.hpp"
#include "lagflow/monitors.hpp"
#include "lagflow/steady.hpp"
#include "lagflow/svg.hpp"

namespace lagflow {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

json report_json(const EstimateReport& r) {
  return json{{"t", r.t},
              {"tol", r.tol},
              {"theta0", r.theta0},
              {"f_min", r.f_min},
              {"f_max", r.f_max},
              {"pass_phase", r.pass_phase},
              {"lambda1_min", r.lam1_min},
              {"lambda1_max", r.lam1_max},
              {"tan_bound", r.tan_bound},
              {"pass_lambda1", r.pass_lambda1},
              {"pass_convex", r.pass_convex},
              {"trace_min", r.trace_min},
              {"trace_max", r.trace_max},
              {"trace_lower", r.trace_lower},
              {"pass_trace", r.pass_trace},
              {"himg_min", r.himg_min},
              {"pass_confinement", r.pass_confinement},
              {"oblique_min_direct", r.oblique_min_direct},
              {"oblique_min_identity", r.oblique_min_identity},
              {"oblique_discrepancy", r.oblique_discrepancy},
              {"pass_oblique", r.pass_oblique},
              {"pass_identity", r.pass_identity},
              {"hess_min", r.hess_min},
              {"hess_max", r.hess_max},
              {"pass_hess_range", r.pass_hess_range},
              {"tangential_max", r.tangential_max},
              {"pass_tangential", r.pass_tangential},
              {"bc_residual_max", r.bc_residual_max},
              {"all_pass", r.all_pass()}};
}

void write_json(const std::string& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << j.dump(2) << '\n';
}

void write_profile_csv(const std::string& path, const Field& f) {
  const Grid& g = *f.grid;
  const JetField jet = differentiate(f);
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << std::setprecision(17);
  os << "x,u,du,d2u,F\n";
  for (int j = 0; j <= g.n1(); ++j) {
    os << g.x1()(j) << ',' << f.v(j, 0) << ',' << jet.ux(j, 0) << ',' << jet.hxx(j, 0) << ','
       << jet.F(j, 0) << '\n';
  }
}

struct FlowArtifacts {
  FlowState state;
  RunResult result;
};

FlowArtifacts execute_flow(const RunConfig& cfg, const std::string& out) {
  const ConvexDomain omega = cfg.make_omega();
  auto grid = cfg.make_grid();
  const Generator gen = cfg.make_generator(omega);
  FlowArtifacts art{init_state(grid, gen, cfg.make_omega_tilde(), cfg.control), {}};

  RunOptions opts;
  opts.monitor_every = cfg.cadence;
  art.result = run(art.state, cfg.control, opts);

  write_monitors_csv(out + "/monitors.csv", art.state, art.result.rows);
  if (cfg.write_dumps) write_field(out + "/field_final.dump", art.state.field);

  const EstimateReport final_rep = estimate_report(art.state, grid->monitor_tol());
  json j = report_json(final_rep);
  j["converged"] = art.result.converged;
  j["steps"] = art.result.steps;
  j["c"] = art.result.c;
  j["audit_ok"] = art.result.audit_ok;
  j["monotone_osc"] = art.result.monotone_osc;
  j["diagnostic"] = art.result.diagnostic;
  write_json(out + "/flow_report.json", j);

  if (grid->dim() == 2 && cfg.write_svg) {
    write_contour_svg(out + "/contours.svg", art.state.field, differentiate(art.state.field));
  }
  if (grid->dim() == 1) {
    write_profile_csv(out + "/profile.csv", art.state.field);
  }
  return art;
}

int flow_status(const RunResult& r) {
  if (!r.converged) {
    std::cerr << "run did not converge: " << r.diagnostic << '\n';
    return 1;
  }
  if (!r.audit_ok || !r.monotone_osc) {
    std::cerr << "estimate audit failed on an accepted step\n";
    return 1;
  }
  return 0;
}

int run_flow(const RunConfig& cfg, const std::string& out) {
  const FlowArtifacts art = execute_flow(cfg, out);
  const int status = flow_status(art.result);
  std::cout << "flow: converged=" << art.result.converged << " steps=" << art.result.steps
            << " c=" << std::setprecision(12) << art.result.c << " audit="
            << (art.result.audit_ok && art.result.monotone_osc ? "pass" : "FAIL") << '\n';
  return status;
}

int run_steady(const RunConfig& cfg, const std::string& out) {
  const ConvexDomain omega = cfg.make_omega();
  auto grid = cfg.make_grid();
  const Generator gen = cfg.make_generator(omega);
  const std::optional<ConvexDomain> tilde = cfg.make_omega_tilde();
  const ConvexDomain target =
      tilde ? *tilde : pushforward_quadratic(omega, gen.A, gen.b, gen.xc);

  Field guess;
  if (!cfg.steady_warm_start.empty()) {
    guess = read_field(cfg.steady_warm_start, grid);
  } else {
    guess = init_state(grid, gen, target, cfg.control).field;
  }
  const SteadySolution sol = solve_steady(grid, target, guess, cfg.steady_tol, cfg.steady_max_iter);

  if (cfg.write_dumps) write_field(out + "/steady_u.dump", sol.field);
  write_json(out + "/steady_report.json",
             json{{"c", sol.c},
                  {"iterations", sol.iterations},
                  {"converged", sol.converged},
                  {"residual_interior", sol.residual_interior},
                  {"residual_boundary", sol.residual_boundary},
                  {"residual_anchor", sol.residual_anchor}});
  std::cout << "steady: converged=" << sol.converged << " iterations=" << sol.iterations
            << " c=" << std::setprecision(12) << sol.c << '\n';
  if (!sol.converged) {
    std::cerr << "steady solve did not reach tolerance\n";
    return 1;
  }
  return 0;
}

int run_legendre_check(const RunConfig& cfg, const std::string& out) {
  FlowArtifacts art = execute_flow(cfg, out);
  const int status = flow_status(art.result);

  auto grid = art.state.field.grid;
  std::shared_ptr<const Grid> dual_grid =
      grid->dim() == 1
          ? Grid::make_1d(art.state.omega_tilde, grid->n1())
          : Grid::make_2d(art.state.omega_tilde, grid->ns(), grid->nphi());

  const DualField dual_a = legendre_transform(art.state.field, dual_grid);

  FlowState later = art.state;
  FlowWorkspace ws;
  for (long i = 0; i < cfg.legendre_steps; ++i) {
    if (!step(later, cfg.control, ws).accepted) break;
  }
  const DualField dual_b = legendre_transform(later.field, dual_grid);

  const DualFlowReport dfr = dual_flow_residual(dual_a, dual_b);
  const HessianInverseReport hir = hessian_inverse_check(art.state.field, dual_a);

  const DualField back = legendre_transform(dual_a.field, grid);
  const double involution_max = (back.field.v - art.state.field.v).cwiseAbs().maxCoeff();

  write_json(out + "/legendre_report.json",
             json{{"hessian_inverse_max", hir.max_discrepancy},
                  {"hessian_inverse_sampled", hir.sampled},
                  {"hessian_inverse_skipped", hir.skipped},
                  {"dual_flow_residual_max", dfr.max_residual},
                  {"involution_max", involution_max},
                  {"extrapolated_dual_nodes", dual_a.extrapolated}});
  std::cout << "legendre-check: hessian_inverse=" << hir.max_discrepancy
            << " dual_flow=" << dfr.max_residual << " involution=" << involution_max << '\n';
  return status;
}

int run_replay(const RunConfig& cfg) {
  const ReplayResult rr = replay_monitors_csv(cfg.replay_csv);
  std::cout << "monitor-replay: rows=" << rr.rows << " pass=" << (rr.all_pass ? "yes" : "NO")
            << '\n';
  for (const auto& v : rr.violations) std::cout << "  violation: " << v << '\n';
  return rr.all_pass ? 0 : 1;
}

}  // namespace

int run_config(const RunConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  fs::create_directories(out_dir);
  switch (cfg.mode) {
    case RunMode::Flow: return run_flow(cfg, out_dir);
    case RunMode::Steady: return run_steady(cfg, out_dir);
    case RunMode::LegendreCheck: return run_legendre_check(cfg, out_dir);
    case RunMode::MonitorReplay: return run_replay(cfg);
  }
  return 2;
}

}  // namespace lagflow
