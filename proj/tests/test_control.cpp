#include "legctl/control.hpp"
#include "legctl/dynamics.hpp"
#include "legctl/oracles.hpp"
#include "legctl/trajectory.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

using namespace legctl;
using legctl::test::kPi;
using legctl::test::max_abs;

TEST_CASE("quintic_trajectory boundary values and midpoint")
{
  const Vec4 a(0, 0.2, 0.1, 0.4);
  const Vec4 b(0.5, 0.6, -0.3, 1.0);
  const TrajectoryPoint p0 = quintic_trajectory(a, b, 2.0, 0.0);
  CHECK(max_abs(p0.q_ref - a) == 0.0);
  CHECK(p0.qd_ref.norm() == 0.0);
  CHECK(p0.qdd_ref.norm() == 0.0);

  const TrajectoryPoint p1 = quintic_trajectory(a, b, 2.0, 2.0);
  CHECK(max_abs(p1.q_ref - b) <= 1e-15);
  CHECK(p1.qd_ref.norm() <= 1e-15);
  CHECK(p1.qdd_ref.norm() <= 1e-14);

  CHECK(max_abs(quintic_trajectory(a, b, 2.0, 1.0).q_ref - 0.5 * (a + b)) <= 1e-15);
}

TEST_CASE("quintic_trajectory clamps outside the interval")
{
  const Vec4 a = Vec4::Zero();
  const Vec4 b = Vec4::Ones();
  const TrajectoryPoint before = quintic_trajectory(a, b, 1.0, -3.0);
  const TrajectoryPoint after = quintic_trajectory(a, b, 1.0, 5.0);
  CHECK(max_abs(before.q_ref - a) == 0.0);
  CHECK(max_abs(after.q_ref - b) <= 1e-15);
  CHECK(after.qd_ref.norm() <= 1e-15);
  CHECK_THROWS_AS(quintic_trajectory(a, b, 0.0, 0.0), InvalidArgument);
}

TEST_CASE("quintic derivatives match finite differences")
{
  const Vec4 a(0.1, -0.2, 0.3, 0.0);
  const Vec4 b(-0.4, 0.8, 0.0, 1.2);
  const double h = 1e-5;
  for (const double t : {0.1, 0.37, 0.8, 1.5})
  {
    const TrajectoryPoint p = quintic_trajectory(a, b, 2.0, t);
    const TrajectoryPoint up = quintic_trajectory(a, b, 2.0, t + h);
    const TrajectoryPoint down = quintic_trajectory(a, b, 2.0, t - h);
    CHECK(max_abs(p.qd_ref - (up.q_ref - down.q_ref) / (2 * h)) <= 1e-8);
    CHECK(max_abs(p.qdd_ref - (up.qd_ref - down.qd_ref) / (2 * h)) <= 1e-7);
  }
}

TEST_CASE("linear_trajectory")
{
  const TrajectoryPoint p = linear_trajectory(Vec4::Zero(), Vec4::Constant(2.0), 4.0, 1.0);
  CHECK(max_abs(p.q_ref - Vec4::Constant(0.5)) == 0.0);
  CHECK(max_abs(p.qd_ref - Vec4::Constant(0.5)) == 0.0);
  CHECK(p.qdd_ref.norm() == 0.0);
}

TEST_CASE("Trajectory through waypoints")
{
  const std::vector<Vec4> wp{Vec4::Zero(), Vec4::Ones(), Vec4::Constant(-1.0)};
  const Trajectory t(wp, 2.0, Interpolation::quintic);
  CHECK(max_abs(t.sample(0.0).q_ref - wp[0]) == 0.0);
  CHECK(max_abs(t.sample(1.0).q_ref - wp[1]) <= 1e-15);
  CHECK(max_abs(t.sample(2.0).q_ref - wp[2]) <= 1e-15);
  CHECK(t.sample(1.0).qd_ref.norm() <= 1e-15);
  CHECK_THROWS_AS(Trajectory({Vec4::Zero()}, 1.0, Interpolation::quintic), InvalidArgument);

  const Trajectory e1 = Trajectory::excitation(Vec4::Zero(), 4, 0.5, 8.0, 9);
  const Trajectory e2 = Trajectory::excitation(Vec4::Zero(), 4, 0.5, 8.0, 9);
  REQUIRE(e1.waypoints().size() == 5);
  for (std::size_t i = 0; i < e1.waypoints().size(); ++i)
  {
    CHECK(max_abs(e1.waypoints()[i] - e2.waypoints()[i]) == 0.0);
    CHECK(e1.waypoints()[i].cwiseAbs().maxCoeff() <= 0.5);
  }
}

TEST_CASE("computed_torque: zero error gives inverse dynamics in both modes")
{
  const RobotParams p;
  const TrajectoryPoint ref{Vec4(0.2, 0.3, -0.1, 0.7), Vec4(0.5, -0.2, 0.1, 0.3), Vec4(1.0, 2.0, -1.0, 0.5)};
  const JointState meas{ref.q_ref, ref.qd_ref, Vec4::Zero()};
  const Vec4 expected = inverse_dynamics(ref.q_ref, ref.qd_ref, ref.qdd_ref, p);
  for (const auto mode : {ControlLawMode::standard, ControlLawMode::paper_literal})
  {
    CHECK(max_abs(computed_torque(meas, ref, Vec5::Ones(), p, Gains{}, mode) - expected) <= 1e-12);
  }
}

TEST_CASE("computed_torque: zero gains reduce to open-loop inverse dynamics")
{
  const RobotParams p;
  const Gains zero{Vec4::Zero(), Vec4::Zero()};
  const TrajectoryPoint ref{Vec4(0.2, 0.3, -0.1, 0.7), Vec4(0.5, -0.2, 0.1, 0.3), Vec4(1.0, 2.0, -1.0, 0.5)};
  const JointState meas{Vec4(0.1, 0.1, 0.1, 0.1), Vec4(-0.3, 0.0, 0.2, 0.4), Vec4::Zero()};
  const Vec4 expected = inverse_dynamics(meas.q, meas.qd, ref.qdd_ref, p);
  for (const auto mode : {ControlLawMode::standard, ControlLawMode::paper_literal})
  {
    CHECK(max_abs(computed_torque(meas, ref, Vec5::Ones(), p, zero, mode) - expected) <= 1e-12);
  }
}

TEST_CASE("computed_torque: regulation torque is M Kp e to first order")
{
  const RobotParams p;
  const Gains gains;
  const Vec4 target(0.3, 0.6, -0.2, 0.9);
  const TrajectoryPoint ref{target, Vec4::Zero(), Vec4::Zero()};
  const Vec4 e(1e-6, -2e-6, 0.5e-6, 1.5e-6);
  const JointState meas{target - e, Vec4::Zero(), Vec4::Zero()};
  const Vec4 tau = computed_torque(meas, ref, Vec5::Ones(), p, gains, ControlLawMode::standard);
  const Vec4 linear = mass_matrix(target, p) * gains.kp.cwiseProduct(e);
  CHECK(max_abs(tau - gravity_vector(meas.q, p) - linear) <= 1e-4 * linear.norm());
}

TEST_CASE("mode and hold names round-trip")
{
  for (const auto mode : {ControlLawMode::standard, ControlLawMode::paper_literal})
  {
    CHECK(parse_control_law_mode(to_string(mode)) == mode);
  }
  CHECK(parse_control_law_mode("paper-literal") == ControlLawMode::paper_literal);
  CHECK_FALSE(parse_control_law_mode("textbook").has_value());
  for (const auto hold : {HoldCompensation::none, HoldCompensation::midpoint})
  {
    CHECK(parse_hold_compensation(to_string(hold)) == hold);
  }
  Gains g;
  g.kd[2] = -1.0;
  CHECK_THROWS_AS(validate(g), InvalidArgument);
}

TEST_CASE("control_tick")
{
  const RobotParams p;
  const ControllerSetup setup{p, Gains{}, ControlLawMode::standard,
                              Trajectory::point_to_point(Vec4::Zero(), Vec4::Ones(), 1.0), 0.01,
                              HoldCompensation::none};
  LoopState state{rls_init(RlsConfig{}), std::nullopt};
  const JointState obs{Vec4(0.01, 0.0, 0.0, 0.0), Vec4::Zero(), Vec4(1, 1, 1, 1)};

  SUBCASE("first tick has no previous torque to regress")
  {
    const TickResult r = control_tick(setup, 0.0, state, obs, true);
    CHECK(r.state.rls.tick == 0);
    REQUIRE(r.state.last_tau.has_value());
    CHECK(max_abs(*r.state.last_tau - r.tau) == 0.0);
    CHECK(max_abs(r.tau - computed_torque(obs, setup.trajectory.sample(0.0), Vec5::Ones(), p, setup.gains,
                                          setup.mode)) == 0.0);
  }

  SUBCASE("adaptation off keeps theta")
  {
    TickResult r = control_tick(setup, 0.0, state, obs, false);
    r = control_tick(setup, 0.01, r.state, obs, false);
    CHECK(r.state.rls.tick == 0);
    CHECK(max_abs(r.state.rls.theta_hat - Vec5::Ones()) == 0.0);
  }

  SUBCASE("estimator failure freezes theta and flags the tick")
  {
    state.last_tau = Vec4::Constant(std::nan(""));
    const TickResult r = control_tick(setup, 0.01, state, obs, true);
    CHECK(r.estimator_frozen);
    CHECK_FALSE(r.estimator_error.empty());
    CHECK(max_abs(r.state.rls.theta_hat - Vec5::Ones()) == 0.0);
  }
}
