#include "legctl/simulation.hpp"

#include "legctl/dynamics.hpp"
#include "legctl/regressor.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace legctl
{

std::pair<Vec4, Vec4> rk4_step(const Vec4& q, const Vec4& qd, const Vec4& tau, double dt, const RobotParams& params)
{
  if (!(dt > 0.0))
  {
    throw InvalidArgument("rk4_step: dt must be > 0");
  }
  const Vec4 k1q = qd;
  const Vec4 k1v = forward_dynamics(q, qd, tau, params);

  const Vec4 k2q = qd + 0.5 * dt * k1v;
  const Vec4 k2v = forward_dynamics(q + 0.5 * dt * k1q, k2q, tau, params);

  const Vec4 k3q = qd + 0.5 * dt * k2v;
  const Vec4 k3v = forward_dynamics(q + 0.5 * dt * k2q, k3q, tau, params);

  const Vec4 k4q = qd + dt * k3v;
  const Vec4 k4v = forward_dynamics(q + dt * k3q, k4q, tau, params);

  return {q + dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q),
          qd + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)};
}

std::string_view to_string(AccelSource source)
{
  return source == AccelSource::plant_exact ? "plant_exact" : "finite_difference";
}

std::optional<AccelSource> parse_accel_source(std::string_view text)
{
  if (text == "plant_exact")
  {
    return AccelSource::plant_exact;
  }
  if (text == "finite_difference")
  {
    return AccelSource::finite_difference;
  }
  return std::nullopt;
}

std::string_view to_string(TrajectoryKind kind)
{
  return kind == TrajectoryKind::point_to_point ? "point_to_point" : "excitation";
}

std::optional<TrajectoryKind> parse_trajectory_kind(std::string_view text)
{
  if (text == "point_to_point")
  {
    return TrajectoryKind::point_to_point;
  }
  if (text == "excitation")
  {
    return TrajectoryKind::excitation;
  }
  return std::nullopt;
}

Trajectory build_trajectory(const TrajectorySpec& spec, double duration, std::uint64_t seed)
{
  if (spec.kind == TrajectoryKind::excitation)
  {
    return Trajectory::excitation(spec.q_start, spec.waypoints, spec.amplitude, duration, seed, spec.interpolation);
  }
  return Trajectory::point_to_point(spec.q_start, spec.q_end, duration, spec.interpolation);
}

int substeps_per_period(double control_period, double plant_substep)
{
  if (!(control_period > 0.0) || !(plant_substep > 0.0))
  {
    throw InvalidArgument("control_period and plant_substep must be > 0");
  }
  const double ratio = control_period / plant_substep;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * ratio)
  {
    throw InvalidArgument("plant_substep must divide control_period exactly");
  }
  return static_cast<int>(rounded);
}

void validate(const ExperimentConfig& config)
{
  validate(config.nominal_params);
  validate(config.true_params);
  true_theta_scales(config.nominal_params, config.true_params);
  validate(config.gains);
  validate(config.rls);
  if (!(std::isfinite(config.duration) && config.duration > 0.0))
  {
    throw InvalidArgument("duration must be > 0");
  }
  substeps_per_period(config.control_period, config.plant_substep);
  if (!(std::isfinite(config.noise_std) && config.noise_std >= 0.0))
  {
    throw InvalidArgument("noise_std must be >= 0");
  }
  if (!config.trajectory.q_start.allFinite() || !config.trajectory.q_end.allFinite())
  {
    throw InvalidArgument("trajectory endpoints must be finite");
  }
  if (config.trajectory.kind == TrajectoryKind::excitation &&
      (config.trajectory.waypoints < 1 || !(config.trajectory.amplitude >= 0.0)))
  {
    throw InvalidArgument("excitation needs waypoints >= 1 and amplitude >= 0");
  }
}

ExperimentConfig identification_experiment(const RobotParams& nominal, double com_scale, double duration,
                                           std::uint64_t seed)
{
  ExperimentConfig config;
  config.nominal_params = nominal;
  config.true_params = nominal;
  config.true_params.com_upper *= com_scale;
  config.true_params.com_lower *= com_scale;
  config.adaptation_on = true;
  config.trajectory.kind = TrajectoryKind::excitation;
  config.trajectory.waypoints = 4;
  config.duration = duration;
  config.rls.initial_cov_scale = kIdentificationCovScale;
  config.seed = seed;
  return config;
}

std::vector<LogRecord> run_experiment(const ExperimentConfig& config, const ExperimentHooks& hooks)
{
  validate(config);
  const ThetaScales theta_star = true_theta_scales(config.nominal_params, config.true_params);
  const int substeps = substeps_per_period(config.control_period, config.plant_substep);
  const double period = config.control_period;
  const double substep = period / substeps;
  const auto ticks = static_cast<std::size_t>(std::floor(config.duration / period + 1e-9));

  const ControllerSetup setup{config.nominal_params, config.gains, config.mode,
                              build_trajectory(config.trajectory, config.duration, config.seed),
                              config.control_period, config.hold};

  // Trajectory waypoints and measurement noise draw from separate streams.
  std::mt19937_64 noise_rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> noise(0.0, 1.0);
  auto corrupt = [&](const Vec4& v) {
    if (config.noise_std == 0.0)
    {
      return v;
    }
    Vec4 out = v;
    for (int j = 0; j < kJoints; ++j)
    {
      out[j] += config.noise_std * noise(noise_rng);
    }
    return out;
  };

  Vec4 q = setup.trajectory.sample(0.0).q_ref;
  Vec4 qd = Vec4::Zero();
  std::optional<Vec4> applied;
  std::optional<Vec4> previous_qd_obs;

  LoopState loop{rls_init(config.rls), std::nullopt};
  std::vector<LogRecord> log;
  log.reserve(ticks + 1);

  for (std::size_t k = 0; k <= ticks; ++k)
  {
    const double t = static_cast<double>(k) * period;

    JointState obs;
    obs.q = corrupt(q);
    obs.qd = corrupt(qd);
    if (config.accel_source == AccelSource::plant_exact)
    {
      obs.qdd = applied ? forward_dynamics(q, qd, *applied, config.true_params) : Vec4::Zero();
    }
    else
    {
      obs.qdd = previous_qd_obs ? Vec4((obs.qd - *previous_qd_obs) / period) : Vec4::Zero();
    }
    previous_qd_obs = obs.qd;

    TickResult tick = control_tick(setup, t, loop, obs, config.adaptation_on);
    if (!tick.tau.allFinite())
    {
      std::ostringstream msg;
      msg << "non-finite torque at t = " << t;
      throw InstabilityError(msg.str());
    }
    loop = std::move(tick.state);

    LogRecord rec;
    rec.t = t;
    rec.q = obs.q;
    rec.qd = obs.qd;
    rec.qdd = obs.qdd;
    rec.q_ref = tick.ref.q_ref;
    rec.qd_ref = tick.ref.qd_ref;
    rec.qdd_ref = tick.ref.qdd_ref;
    rec.tau = tick.tau;
    rec.theta_hat = loop.rls.theta_hat;
    rec.theta_error_sq = (loop.rls.theta_hat - theta_star).squaredNorm();
    rec.estimator_frozen = tick.estimator_frozen;
    log.push_back(rec);

    if (k == ticks)
    {
      break;
    }

    applied = tick.tau;
    for (int s = 0; s < substeps; ++s)
    {
      if (hooks.on_substep)
      {
        hooks.on_substep(t + s * substep, *applied);
      }
      std::tie(q, qd) = rk4_step(q, qd, *applied, substep, config.true_params);
    }
    if (!q.allFinite() || !qd.allFinite())
    {
      std::ostringstream msg;
      msg << "plant state became non-finite during the period starting at t = " << t;
      throw InstabilityError(msg.str());
    }
  }

  if (hooks.final_plant_state != nullptr)
  {
    *hooks.final_plant_state = {q, qd};
  }
  return log;
}

} // namespace legctl
