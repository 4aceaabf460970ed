#include "legctl/control.hpp"

namespace legctl
{

void validate(const Gains& gains)
{
  if (!gains.kp.allFinite() || !gains.kd.allFinite() || (gains.kp.array() < 0.0).any() ||
      (gains.kd.array() < 0.0).any())
  {
    throw InvalidArgument("gains must be finite and non-negative");
  }
}

std::string_view to_string(ControlLawMode mode)
{
  return mode == ControlLawMode::standard ? "standard" : "paper_literal";
}

std::optional<ControlLawMode> parse_control_law_mode(std::string_view text)
{
  if (text == "standard")
  {
    return ControlLawMode::standard;
  }
  if (text == "paper_literal" || text == "paper-literal")
  {
    return ControlLawMode::paper_literal;
  }
  return std::nullopt;
}

std::string_view to_string(HoldCompensation hold)
{
  return hold == HoldCompensation::none ? "none" : "midpoint";
}

std::optional<HoldCompensation> parse_hold_compensation(std::string_view text)
{
  if (text == "none")
  {
    return HoldCompensation::none;
  }
  if (text == "midpoint")
  {
    return HoldCompensation::midpoint;
  }
  return std::nullopt;
}

Vec4 computed_torque(const JointState& meas, const TrajectoryPoint& ref, const ThetaScales& theta_hat,
                     const RobotParams& params, const Gains& gains, ControlLawMode mode)
{
  const Vec4 e = ref.q_ref - meas.q;
  const Vec4 edot = ref.qd_ref - meas.qd;
  const Vec4 p_term = gains.kp.cwiseProduct(e);
  const Vec4 d_term = gains.kd.cwiseProduct(edot);

  switch (mode)
  {
  case ControlLawMode::standard:
    return regressor_scaled(meas.q, meas.qd, ref.qdd_ref + p_term + d_term, params) * theta_hat;
  case ControlLawMode::paper_literal:
    return regressor_scaled(meas.q + p_term, meas.qd + d_term, ref.qdd_ref, params) * theta_hat;
  }
  return Vec4::Zero();
}

TickResult control_tick(const ControllerSetup& setup, double clock, const LoopState& state,
                        const JointState& observation, bool adaptation_on)
{
  TickResult result;
  result.state = state;

  if (adaptation_on && state.last_tau)
  {
    const RegressorMatrix phi = regressor_scaled(observation.q, observation.qd, observation.qdd, setup.nominal);
    try
    {
      result.state.rls = rls_update(state.rls, phi, *state.last_tau);
    }
    catch (const Error& err)
    {
      result.estimator_frozen = true;
      result.estimator_error = err.what();
    }
  }

  result.ref = setup.trajectory.sample(clock);
  const ThetaScales& theta = result.state.rls.theta_hat;
  if (setup.hold == HoldCompensation::midpoint)
  {
    const double half = 0.5 * setup.control_period;
    const Vec4 accel = result.ref.qdd_ref + setup.gains.kp.cwiseProduct(result.ref.q_ref - observation.q) +
                       setup.gains.kd.cwiseProduct(result.ref.qd_ref - observation.qd);
    JointState predicted = observation;
    predicted.q = observation.q + half * observation.qd + 0.5 * half * half * accel;
    predicted.qd = observation.qd + half * accel;
    result.tau = computed_torque(predicted, setup.trajectory.sample(clock + half), theta, setup.nominal,
                                 setup.gains, setup.mode);
  }
  else
  {
    result.tau = computed_torque(observation, result.ref, theta, setup.nominal, setup.gains, setup.mode);
  }
  result.state.last_tau = result.tau;
  return result;
}

} // namespace legctl
