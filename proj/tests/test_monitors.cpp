#include <doctest.h>

#include "lagflow/monitors.hpp"

using namespace lagflow;

namespace {

FlowState disc_fixed_point(int ns = 16, int nphi = 32) {
  const auto g = Grid::make_2d(ConvexDomain::disc(1.0), ns, nphi);
  return init_state(g, Generator{}, std::nullopt, StepControl{});
}

}  // namespace

TEST_CASE("estimate report on u = |x|^2/2: every closed form sits on its bound") {
  FlowState st = disc_fixed_point();
  const EstimateReport rep = estimate_report(st, st.field.grid->monitor_tol());
  CHECK(rep.theta0 == doctest::Approx(M_PI / 2.0));
  CHECK(rep.f_max == doctest::Approx(M_PI / 2.0));
  CHECK(rep.tan_bound == doctest::Approx(1.0));  // tan(pi/4)
  CHECK(rep.lam1_max == doctest::Approx(1.0));
  CHECK(rep.trace_min == doctest::Approx(1.0));
  CHECK(rep.trace_lower == doctest::Approx(0.5));
  CHECK(rep.trace_max <= 2.0 + rep.tol);
  CHECK(rep.all_pass());
}

TEST_CASE("estimate report in 1D with u'' = 2: eigenvalue bound holds with equality") {
  const auto g = Grid::make_1d(ConvexDomain::interval(0.0, 1.0), 16);
  Generator gen;
  gen.A(0, 0) = 2.0;
  gen.b = {1.0, 0.0};
  FlowState st = init_state(g, gen, std::nullopt, StepControl{});
  const EstimateReport rep = estimate_report(st, g->monitor_tol());
  CHECK(rep.tan_bound == doctest::Approx(2.0).epsilon(1e-12));  // tan(arctan 2)
  CHECK(rep.lam1_max == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(rep.all_pass());
}

TEST_CASE("negative control: a slice violating the phase bound is flagged") {
  FlowState st = disc_fixed_point();
  st.theta0 -= 0.1;  // fabricate F > Theta0 at every node
  const EstimateReport rep = estimate_report(st, st.field.grid->monitor_tol());
  CHECK(!rep.pass_phase);
  CHECK(!rep.all_pass());
}

TEST_CASE("obliqueness: unit disc to unit disc gives <beta,nu> = 1 both ways") {
  FlowState st = disc_fixed_point();
  const ObliquenessReport ob = obliqueness(st);
  CHECK(ob.min_direct == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(ob.min_identity == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(ob.max_discrepancy < 1e-8);
}

TEST_CASE("obliqueness: 1D (0,1)->(0,1) with u = x^2/2") {
  const auto g = Grid::make_1d(ConvexDomain::interval(0.0, 1.0), 16);
  FlowState st = init_state(g, Generator{}, ConvexDomain::interval(0.0, 1.0), StepControl{});
  const ObliquenessReport ob = obliqueness(st);
  CHECK(ob.min_direct == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(ob.min_identity == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(ob.max_discrepancy < 1e-9);
}

TEST_CASE("obliqueness scales linearly with the defining function") {
  FlowState st = disc_fixed_point();
  const ObliquenessReport base = obliqueness(st);
  FlowState scaled = st;
  scaled.omega_tilde = st.omega_tilde.rescaled(2.0);
  const ObliquenessReport twice = obliqueness(scaled);
  CHECK(twice.min_direct == doctest::Approx(2.0 * base.min_direct).epsilon(1e-9));
  CHECK(twice.min_identity == doctest::Approx(2.0 * base.min_identity).epsilon(1e-9));
}

TEST_CASE("tangential boundary residual") {
  FlowState st = disc_fixed_point();
  CHECK(boundary_tangential_check(st) < 1e-10);

  // unprojected ghost: strictly positive residual, flagged by the report
  st.field.ghost(3) += 0.05;
  const double v = boundary_tangential_check(st);
  CHECK(v > 1e-4);
  const EstimateReport rep = estimate_report(st, st.field.grid->monitor_tol());
  CHECK(!rep.pass_tangential);
}

TEST_CASE("monitor csv round trip and replay flags") {
  FlowState st = disc_fixed_point(8, 16);
  StepControl ctl;
  ctl.max_steps = 50;
  const RunResult rr = run(st, ctl);
  REQUIRE(!rr.rows.empty());
  const std::string path = "monitors_test.csv";
  write_monitors_csv(path, st, rr.rows);
  const ReplayResult rep = replay_monitors_csv(path);
  CHECK(rep.all_pass);
  CHECK(rep.rows == long(rr.rows.size()));

  // doctor one row: maxF above Theta0
  std::vector<MonitorRow> bad = rr.rows;
  bad.back().max_f = st.theta0 + 0.5;
  write_monitors_csv(path, st, bad);
  const ReplayResult rep2 = replay_monitors_csv(path);
  CHECK(!rep2.all_pass);
  CHECK(!rep2.violations.empty());
}
