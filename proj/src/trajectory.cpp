#include "legctl/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace legctl
{

namespace
{

void require_duration(double duration)
{
  if (!(std::isfinite(duration) && duration > 0.0))
  {
    throw InvalidArgument("trajectory duration must be > 0");
  }
}

} // namespace

TrajectoryPoint quintic_trajectory(const Vec4& q_start, const Vec4& q_end, double duration, double t)
{
  require_duration(duration);
  const double s = std::clamp(t, 0.0, duration) / duration;
  const double s2 = s * s;
  const double s3 = s2 * s;

  const double blend = s3 * (10.0 - 15.0 * s + 6.0 * s2);
  const double blend_d = 30.0 * s2 * (1.0 - 2.0 * s + s2) / duration;
  const double blend_dd = 60.0 * s * (1.0 - 3.0 * s + 2.0 * s2) / (duration * duration);

  const Vec4 delta = q_end - q_start;
  TrajectoryPoint p;
  p.q_ref = q_start + blend * delta;
  p.qd_ref = blend_d * delta;
  p.qdd_ref = blend_dd * delta;
  if (t >= duration)
  {
    p.q_ref = q_end;
  }
  return p;
}

TrajectoryPoint linear_trajectory(const Vec4& q_start, const Vec4& q_end, double duration, double t)
{
  require_duration(duration);
  const double s = std::clamp(t, 0.0, duration) / duration;
  TrajectoryPoint p;
  p.q_ref = q_start + s * (q_end - q_start);
  if (t >= 0.0 && t <= duration)
  {
    p.qd_ref = (q_end - q_start) / duration;
  }
  return p;
}

Trajectory::Trajectory(std::vector<Vec4> waypoints, double duration, Interpolation interpolation)
    : waypoints_(std::move(waypoints)), duration_(duration), interpolation_(interpolation)
{
  require_duration(duration);
  if (waypoints_.size() < 2)
  {
    throw InvalidArgument("trajectory needs at least two waypoints");
  }
}

Trajectory Trajectory::point_to_point(const Vec4& q_start, const Vec4& q_end, double duration,
                                      Interpolation interpolation)
{
  return Trajectory({q_start, q_end}, duration, interpolation);
}

Trajectory Trajectory::excitation(const Vec4& q_start, int count, double amplitude, double duration,
                                  std::uint64_t seed, Interpolation interpolation)
{
  if (count < 1)
  {
    throw InvalidArgument("excitation trajectory needs at least one waypoint");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> offset(-amplitude, amplitude);
  std::vector<Vec4> waypoints{q_start};
  for (int k = 0; k < count; ++k)
  {
    Vec4 w;
    for (int j = 0; j < kJoints; ++j)
    {
      w[j] = q_start[j] + offset(rng);
    }
    waypoints.push_back(w);
  }
  return Trajectory(std::move(waypoints), duration, interpolation);
}

TrajectoryPoint Trajectory::sample(double t) const
{
  const auto segments = static_cast<double>(waypoints_.size() - 1);
  const double segment_duration = duration_ / segments;
  const double clamped = std::clamp(t, 0.0, duration_);
  auto index = static_cast<std::size_t>(std::floor(clamped / segment_duration));
  index = std::min(index, waypoints_.size() - 2);
  const double local = t - static_cast<double>(index) * segment_duration;

  const Vec4& a = waypoints_[index];
  const Vec4& b = waypoints_[index + 1];
  return interpolation_ == Interpolation::quintic ? quintic_trajectory(a, b, segment_duration, local)
                                                  : linear_trajectory(a, b, segment_duration, local);
}

} // namespace legctl
