#pragma once

#include "legctl/control.hpp"
#include "legctl/estimator.hpp"
#include "legctl/trajectory.hpp"
#include "legctl/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace legctl
{

/// One classical RK4 step of (q, qd)' = (qd, forward_dynamics(q, qd, tau))
/// with tau held constant.
std::pair<Vec4, Vec4> rk4_step(const Vec4& q, const Vec4& qd, const Vec4& tau, double dt, const RobotParams& params);

enum class AccelSource
{
  plant_exact,       ///< forward dynamics under the torque held over the last period
  finite_difference, ///< backward difference of observed qd over one control period
};

std::string_view to_string(AccelSource source);
std::optional<AccelSource> parse_accel_source(std::string_view text);

enum class TrajectoryKind
{
  point_to_point,
  excitation, ///< quintic segments through random waypoints
};

std::string_view to_string(TrajectoryKind kind);
std::optional<TrajectoryKind> parse_trajectory_kind(std::string_view text);

struct TrajectorySpec
{
  TrajectoryKind kind = TrajectoryKind::point_to_point;
  Interpolation interpolation = Interpolation::quintic;
  Vec4 q_start = (Vec4() << 0.0, 0.2, 0.1, 0.4).finished();
  Vec4 q_end = (Vec4() << 0.5, 0.6, -0.3, 1.0).finished();
  int waypoints = 4;      ///< excitation only
  double amplitude = 1.0; ///< excitation only, rad
};

Trajectory build_trajectory(const TrajectorySpec& spec, double duration, std::uint64_t seed);

struct ExperimentConfig
{
  RobotParams nominal_params;
  RobotParams true_params;
  Gains gains;
  ControlLawMode mode = ControlLawMode::standard;
  HoldCompensation hold = HoldCompensation::midpoint;
  RlsConfig rls;
  bool adaptation_on = true;
  TrajectorySpec trajectory;
  double duration = 2.0;
  double control_period = 0.01;
  double plant_substep = 1e-4;
  AccelSource accel_source = AccelSource::plant_exact;
  double noise_std = 0.0;
  std::uint64_t seed = 1;
};

/// Throws InvalidArgument naming the offending field.
void validate(const ExperimentConfig& config);

/// Prior covariance scale used for identification runs. The upper-CoM
/// columns and the constant column of the regressor are separated only by the
/// rotor-inertia term, so the prior has to be weak for the data to pin that
/// direction down.
inline constexpr double kIdentificationCovScale = 1e8;

/// Adaptive run on the excitation trajectory with both plant CoM distances
/// scaled by `com_scale` relative to `nominal`.
ExperimentConfig identification_experiment(const RobotParams& nominal, double com_scale, double duration,
                                           std::uint64_t seed);

/// Number of plant substeps per control period; throws if the substep does
/// not divide the period.
int substeps_per_period(double control_period, double plant_substep);

/// One row per control tick. q, qd, qdd are the values the controller observed.
struct LogRecord
{
  double t = 0.0;
  Vec4 q = Vec4::Zero();
  Vec4 qd = Vec4::Zero();
  Vec4 qdd = Vec4::Zero();
  Vec4 q_ref = Vec4::Zero();
  Vec4 qd_ref = Vec4::Zero();
  Vec4 qdd_ref = Vec4::Zero();
  Vec4 tau = Vec4::Zero();
  Vec5 theta_hat = Vec5::Zero();
  double theta_error_sq = 0.0;
  bool estimator_frozen = false;
};

/// Called before every plant substep with the substep start time and the
/// torque applied over it.
using SubstepObserver = std::function<void(double t, const Vec4& tau)>;

struct ExperimentHooks
{
  SubstepObserver on_substep;
  /// Plant state (q, qd) at the end of the run.
  std::pair<Vec4, Vec4>* final_plant_state = nullptr;
};

/// Closed-loop run: floor(duration / control_period) + 1 records.
/// Throws InstabilityError when the plant or the torque stops being finite.
std::vector<LogRecord> run_experiment(const ExperimentConfig& config, const ExperimentHooks& hooks = {});

} // namespace legctl
