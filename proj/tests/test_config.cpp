#include "legctl/config.hpp"

#include <doctest.h>

#include <string>

using namespace legctl;

namespace
{

ConfigError parse_error(const std::string& text)
{
  try
  {
    parse_config(text);
  }
  catch (const ConfigError& e)
  {
    return e;
  }
  FAIL("expected a ConfigError for:\n" << text);
  return ConfigError("", 0, "");
}

} // namespace

TEST_CASE("empty text yields the defaults")
{
  const ExperimentConfig c = parse_config("");
  CHECK(c.nominal_params == RobotParams{});
  CHECK(c.true_params == c.nominal_params);
  CHECK(c.adaptation_on);
  CHECK(c.duration == 2.0);
  CHECK(c.control_period == 0.01);
  CHECK(c.mode == ControlLawMode::standard);
}

TEST_CASE("sections, comments, lists and scalar broadcast")
{
  const ExperimentConfig c = parse_config(R"(
# plant is heavier at the CoM
[robot.nominal]
len_upper = 0.5
com_upper = 0.25

[robot.true]
com_upper = 0.3   # trailing comment

[gains]
kp = 64
kd = [16, 16, 16, 20]

[trajectory]
kind = excitation
q_start = [0, 0.1, 0.2, 0.3]
waypoints = 6
duration = 5

[rls]
adaptation = false
initial_cov_scale = 1e6
forgetting = 0.99

[sim]
mode = paper_literal
hold_compensation = none
accel_source = finite_difference
noise_std = 0.001
seed = 17
)");
  CHECK(c.nominal_params.len_upper == 0.5);
  CHECK(c.true_params.len_upper == 0.5);
  CHECK(c.true_params.com_upper == 0.3);
  CHECK(c.nominal_params.com_upper == 0.25);
  CHECK(c.gains.kp == Vec4::Constant(64));
  CHECK(c.gains.kd == Vec4(16, 16, 16, 20));
  CHECK(c.trajectory.kind == TrajectoryKind::excitation);
  CHECK(c.trajectory.q_start == Vec4(0, 0.1, 0.2, 0.3));
  CHECK(c.trajectory.waypoints == 6);
  CHECK(c.duration == 5.0);
  CHECK_FALSE(c.adaptation_on);
  CHECK(c.rls.initial_cov_scale == 1e6);
  CHECK(c.rls.forgetting == 0.99);
  CHECK(c.mode == ControlLawMode::paper_literal);
  CHECK(c.hold == HoldCompensation::none);
  CHECK(c.accel_source == AccelSource::finite_difference);
  CHECK(c.noise_std == 0.001);
  CHECK(c.seed == 17);
}

TEST_CASE("range errors name the key and line")
{
  const ConfigError e = parse_error("[robot.nominal]\ngravity = -1\n");
  CHECK(e.key == "gravity");
  CHECK(e.line == 2);
  CHECK(std::string(e.what()).find("gravity") != std::string::npos);
}

TEST_CASE("substep must divide the control period")
{
  CHECK(parse_error("[sim]\ncontrol_period = 0.01\nplant_substep = 0.0003\n").key == "plant_substep");
}

TEST_CASE("malformed input")
{
  CHECK(parse_error("[robot.nominal]\nbogus = 1\n").key == "bogus");
  CHECK(parse_error("[nowhere]\n").line == 1);
  CHECK(parse_error("[gains]\nkp = 1\nkp = 2\n").key == "kp");
  CHECK(parse_error("[gains]\nkp = [1, 2]\n").key == "kp");
  CHECK(parse_error("[gains]\nkp = abc\n").key == "kp");
  CHECK(parse_error("duration = 3\n").line == 1);
  CHECK(parse_error("[sim]\nmode = textbook\n").key == "mode");
  CHECK(parse_error("[robot.true]\nmass_upper = 2\n").key == "mass_upper");
  CHECK(parse_error("[robot.nominal]\nlen_upper 0.4\n").line == 2);
}

TEST_CASE("format_config round-trips")
{
  ExperimentConfig c;
  c.true_params.com_lower = 0.23456789012345678;
  c.gains.kp = Vec4(1, 2, 3, 4);
  c.trajectory.kind = TrajectoryKind::excitation;
  c.rls.initial_theta = Vec5(0.9, 1.1, 1.0, 1.3, 0.7);
  c.noise_std = 1e-5;
  c.seed = 123456789;
  const ExperimentConfig back = parse_config(format_config(c));
  CHECK(back.true_params == c.true_params);
  CHECK(back.nominal_params == c.nominal_params);
  CHECK(back.gains.kp == c.gains.kp);
  CHECK(back.trajectory.kind == c.trajectory.kind);
  CHECK(back.rls.initial_theta == c.rls.initial_theta);
  CHECK(back.noise_std == c.noise_std);
  CHECK(back.seed == c.seed);
  CHECK(format_config(back) == format_config(c));
}

TEST_CASE("load_config reports missing files")
{
  CHECK_THROWS_AS(load_config("/nonexistent/leg.cfg"), Error);
}
