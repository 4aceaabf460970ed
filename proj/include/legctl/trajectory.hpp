#pragma once

#include "legctl/types.hpp"

#include <cstdint>
#include <vector>

namespace legctl
{

struct TrajectoryPoint
{
  Vec4 q_ref = Vec4::Zero();
  Vec4 qd_ref = Vec4::Zero();
  Vec4 qdd_ref = Vec4::Zero();
};

enum class Interpolation
{
  quintic, ///< rest-to-rest quintic, continuous up to acceleration
  linear,  ///< constant velocity, zero acceleration
};

/// Rest-to-rest quintic between two joint configurations. Times outside
/// [0, duration] hold the nearer endpoint.
TrajectoryPoint quintic_trajectory(const Vec4& q_start, const Vec4& q_end, double duration, double t);

TrajectoryPoint linear_trajectory(const Vec4& q_start, const Vec4& q_end, double duration, double t);

/// Piecewise trajectory through joint-space waypoints, equal time per segment.
class Trajectory
{
public:
  Trajectory(std::vector<Vec4> waypoints, double duration, Interpolation interpolation);

  static Trajectory point_to_point(const Vec4& q_start, const Vec4& q_end, double duration,
                                   Interpolation interpolation = Interpolation::quintic);

  /// q_start followed by `count` waypoints drawn uniformly from
  /// q_start +- amplitude on every joint.
  static Trajectory excitation(const Vec4& q_start, int count, double amplitude, double duration,
                               std::uint64_t seed, Interpolation interpolation = Interpolation::quintic);

  TrajectoryPoint sample(double t) const;

  double duration() const { return duration_; }
  const std::vector<Vec4>& waypoints() const { return waypoints_; }

private:
  std::vector<Vec4> waypoints_;
  double duration_;
  Interpolation interpolation_;
};

} // namespace legctl
