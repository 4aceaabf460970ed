#pragma once

#include "legctl/estimator.hpp"
#include "legctl/regressor.hpp"
#include "legctl/trajectory.hpp"
#include "legctl/types.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace legctl
{

/// Diagonal PD gains. kp in 1/s^2, kd in 1/s.
struct Gains
{
  Vec4 kp = Vec4::Constant(100.0);
  Vec4 kd = Vec4::Constant(20.0);

  Mat4 kp_matrix() const { return kp.asDiagonal(); }
  Mat4 kd_matrix() const { return kd.asDiagonal(); }
};

void validate(const Gains& gains);

enum class ControlLawMode
{
  /// tau = Phi'(q, qd, qdd_ref + Kp e + Kd edot) theta
  standard,
  /// tau = Phi'(q + Kp e, qd + Kd edot, qdd_ref) theta, with the corrections
  /// substituted into the position and velocity arguments.
  paper_literal,
};

std::string_view to_string(ControlLawMode mode);
std::optional<ControlLawMode> parse_control_law_mode(std::string_view text);

/// Computed-torque law with errors e = q_ref - q, edot = qd_ref - qd.
Vec4 computed_torque(const JointState& meas, const TrajectoryPoint& ref, const ThetaScales& theta_hat,
                     const RobotParams& params, const Gains& gains, ControlLawMode mode);

/// Where inside the hold interval the control law is evaluated.
enum class HoldCompensation
{
  /// at the tick, with the measured state
  none,
  /// at the middle of the interval: reference sampled at t + T/2 and the
  /// state extrapolated half a period with the commanded acceleration.
  /// Removes the first-order lag a held torque otherwise carries.
  midpoint,
};

std::string_view to_string(HoldCompensation hold);
std::optional<HoldCompensation> parse_hold_compensation(std::string_view text);

/// Everything fixed for the duration of a control run.
struct ControllerSetup
{
  RobotParams nominal;
  Gains gains;
  ControlLawMode mode = ControlLawMode::standard;
  Trajectory trajectory;
  double control_period = 0.01;
  HoldCompensation hold = HoldCompensation::midpoint;
};

/// Mutable memory carried from one tick to the next.
struct LoopState
{
  RlsState rls;
  std::optional<Vec4> last_tau; ///< torque held over the previous period
};

struct TickResult
{
  Vec4 tau;
  TrajectoryPoint ref; ///< reference at the tick time
  LoopState state;
  bool estimator_frozen = false;
  std::string estimator_error;
};

/**
 * One controller tick. When adaptation is on and a previous torque exists,
 * the estimator first regresses that torque on the observed (q, qd, qdd);
 * the torque for the coming period is then computed with the refreshed
 * estimate, at the evaluation point chosen by setup.hold. A singular
 * estimator update leaves theta unchanged and sets estimator_frozen. The
 * returned torque is meant to be held (ZOH) until the next tick.
 */
TickResult control_tick(const ControllerSetup& setup, double clock, const LoopState& state,
                        const JointState& observation, bool adaptation_on);

} // namespace legctl
