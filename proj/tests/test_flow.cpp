#include <doctest.h>

#include "lagflow/flow.hpp"

using namespace lagflow;

namespace {

const double kAtan2 = std::atan(2.0);  // 1.1071487177940904

Generator quad_gen_1d(double a, double b) {
  Generator g;
  g.A = Eigen::Matrix2d::Identity();
  g.A(0, 0) = a;
  g.b = {b, 0.0};
  return g;
}

}  // namespace

TEST_CASE("cfl step size") {
  const auto g = Grid::make_1d(ConvexDomain::interval(0.0, 1.0), 10);
  CHECK(cfl_dt(*g, 0.5) == doctest::Approx(0.0025).epsilon(1e-14));
}

TEST_CASE("init: quadratic on the unit disc has Theta0 = pi/2") {
  const auto g = Grid::make_2d(ConvexDomain::disc(1.0), 8, 16);
  Generator gen;  // A = I
  const FlowState st = init_state(g, gen, std::nullopt, StepControl{});
  CHECK(st.theta0 == doctest::Approx(M_PI / 2.0).epsilon(1e-12));
  CHECK(st.omega_tilde.kind() == DomainKind::Disc);
}

TEST_CASE("init: 1D (0,1) with A=2, b=1 maps onto (1,3), Theta0 = arctan 2") {
  const auto g = Grid::make_1d(ConvexDomain::interval(0.0, 1.0), 16);
  const FlowState st = init_state(g, quad_gen_1d(2.0, 1.0), std::nullopt, StepControl{});
  CHECK(st.omega_tilde.interval_a() == doctest::Approx(1.0));
  CHECK(st.omega_tilde.interval_b() == doctest::Approx(3.0));
  CHECK(st.theta0 == doctest::Approx(kAtan2).epsilon(1e-12));
}

TEST_CASE("init: convexity gate rejects a too-large perturbation") {
  const auto g = Grid::make_1d(ConvexDomain::interval(0.0, 1.0), 32);
  Generator gen = quad_gen_1d(2.0, 1.0);
  gen.kind = Generator::Kind::Perturbed;
  gen.bump_center = {0.5, 0.0};
  gen.bump_width = 0.25;
  gen.eps = 0.5;  // second derivative of the bump overwhelms A
  CHECK_THROWS_AS(init_state(g, gen, std::nullopt, StepControl{}), std::invalid_argument);
}

TEST_CASE("init: bump must sit strictly inside the domain") {
  const auto g = Grid::make_1d(ConvexDomain::interval(0.0, 1.0), 32);
  Generator gen = quad_gen_1d(2.0, 1.0);
  gen.kind = Generator::Kind::Perturbed;
  gen.bump_center = {0.9, 0.0};
  gen.bump_width = 0.25;
  gen.eps = 1e-3;
  CHECK_THROWS_AS(init_state(g, gen, std::nullopt, StepControl{}), std::invalid_argument);
}

TEST_CASE("boundary projection reproduces exact steady data in 1D") {
  const auto g = Grid::make_1d(ConvexDomain::interval(0.0, 1.0), 16);
  const StepControl ctl;
  FlowState st = init_state(g, quad_gen_1d(1.0, 0.0), ConvexDomain::interval(0.0, 1.0), ctl);
  // u = x^2/2: ghosts must encode u'(0) = 0 and u'(1) = 1 through the
  // centered difference
  const double d = g->delta();
  CHECK((st.field.v(1, 0) - st.field.ghost(0)) / (2.0 * d) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK((st.field.ghost(1) - st.field.v(g->n1() - 1, 0)) / (2.0 * d) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(st.bc_residual <= ctl.tol_b);
}

TEST_CASE("boundary projection is a fixed point on compatible 2D data") {
  const auto g = Grid::make_2d(ConvexDomain::disc(1.0), 16, 32);
  const StepControl ctl;
  FlowState st = init_state(g, Generator{}, std::nullopt, ctl);
  const Eigen::ArrayXd ghosts0 = st.field.ghost;
  const BoundaryReport rep = enforce_boundary(st, ctl);
  CHECK(rep.converged);
  CHECK(rep.monotone);
  CHECK(rep.max_residual <= ctl.tol_b);
  CHECK((st.field.ghost - ghosts0).abs().maxCoeff() < 1e-11);

  // perturb one ghost and re-project: restored
  st.field.ghost(5) += 0.1;
  enforce_boundary(st, ctl);
  CHECK(std::abs(st.field.ghost(5) - ghosts0(5)) < 1e-9);
}

TEST_CASE("step: constant phase adds dt * F pointwise") {
  SUBCASE("2D quadratic fixed point") {
    const auto g = Grid::make_2d(ConvexDomain::disc(1.0), 8, 16);
    const StepControl ctl;
    FlowState st = init_state(g, Generator{}, std::nullopt, ctl);
    const Eigen::MatrixXd u0 = st.field.v;
    const JetField j0 = differentiate(st.field);
    FlowWorkspace ws;
    const StepResult sr = step(st, ctl, ws);
    CHECK(sr.accepted);
    CHECK(sr.dt == doctest::Approx(cfl_dt(*g, ctl.sigma)));
    const Eigen::MatrixXd expected = u0.array() + sr.dt * (M_PI / 2.0);
    CHECK((st.field.v - expected).cwiseAbs().maxCoeff() < 1e-13);
    const JetField j1 = differentiate(st.field);
    CHECK((j1.ux - j0.ux).abs().maxCoeff() < 1e-10);
    CHECK((j1.uy - j0.uy).abs().maxCoeff() < 1e-10);
  }
  SUBCASE("1D constant phase") {
    const auto g = Grid::make_1d(ConvexDomain::interval(0.0, 1.0), 16);
    const StepControl ctl;
    FlowState st = init_state(g, quad_gen_1d(2.0, 1.0), std::nullopt, ctl);
    const Eigen::MatrixXd u0 = st.field.v;
    FlowWorkspace ws;
    const StepResult sr = step(st, ctl, ws);
    CHECK(sr.accepted);
    const Eigen::MatrixXd expected = u0.array() + sr.dt * kAtan2;
    CHECK((st.field.v - expected).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("run: exact fixed point converges at step 0") {
  const auto g = Grid::make_2d(ConvexDomain::disc(1.0), 8, 16);
  StepControl ctl;
  FlowState st = init_state(g, Generator{}, std::nullopt, ctl);
  const RunResult rr = run(st, ctl);
  CHECK(rr.converged);
  CHECK(rr.steps == 0);
  CHECK(rr.c == doctest::Approx(M_PI / 2.0).epsilon(1e-12));
  CHECK(rr.audit_ok);
  CHECK(rr.monotone_osc);
}

TEST_CASE("run: small 1D perturbed flow converges to arctan 2") {
  const auto g = Grid::make_1d(ConvexDomain::interval(0.0, 1.0), 32);
  StepControl ctl;
  ctl.tol_c = 1e-7;
  Generator gen = quad_gen_1d(2.0, 1.0);
  gen.kind = Generator::Kind::Perturbed;
  gen.bump_center = {0.5, 0.0};
  gen.bump_width = 0.25;
  gen.eps = 0.008;
  FlowState st = init_state(g, gen, std::nullopt, ctl);
  CHECK(st.theta0 > kAtan2);
  const RunResult rr = run(st, ctl);
  CHECK(rr.converged);
  CHECK(rr.audit_ok);
  CHECK(rr.monotone_osc);
  CHECK(std::abs(rr.c - kAtan2) < 1e-3);
  CHECK(!rr.rows.empty());
  CHECK(rr.rows.back().osc_f <= ctl.tol_c);
}

TEST_CASE("run: dt halving recovers from an over-aggressive step") {
  // sigma = 1 with a rough start can lose convexity; the divergence policy
  // halves dt and the run still finishes
  const auto g = Grid::make_1d(ConvexDomain::interval(0.0, 1.0), 32);
  StepControl ctl;
  ctl.sigma = 1.0;
  ctl.tol_c = 1e-5;
  Generator gen = quad_gen_1d(2.0, 1.0);
  gen.kind = Generator::Kind::Perturbed;
  gen.bump_center = {0.45, 0.0};
  gen.bump_width = 0.3;
  gen.eps = 0.01;
  FlowState st = init_state(g, gen, std::nullopt, ctl);
  const RunResult rr = run(st, ctl);
  CHECK(rr.converged);  // possibly after halvings; dt history records them
}
