#pragma once

#include "legctl/types.hpp"

#include <array>
#include <string_view>
#include <vector>

namespace legctl
{

enum class Axis
{
  x,
  y,
  z,
};

enum class Body
{
  upper, ///< upper-link center of mass
  lower, ///< lower-link center of mass
  tip,
};

/// Right-handed rotation about a principal axis.
Mat3 rot_axis(Axis axis, double angle);

/// k-th derivative of rot_axis with respect to the angle.
Mat3 rot_axis_derivative(Axis axis, double angle, int order);

/**
 * A point rigidly attached to the leg, described by how far it sits along
 * each link axis:
 *
 *   r(q) = Rz(q0) Ry(-q1) Rx(q2) [ (0, 0, along_upper) + Ry(q3) (0, 0, along_lower) ]
 *
 * Every body of the chain is an instance: the upper CoM is (com_upper, 0),
 * the lower CoM is (len_upper, com_lower) and the tip is (len_upper, len_lower).
 */
struct LegPoint
{
  double along_upper = 0.0;
  double along_lower = 0.0;
};

LegPoint leg_point(Body body, const RobotParams& params);

Vec3 point_position(const LegPoint& point, const Vec4& q);

/// dr/dq, closed form.
Mat34 point_jacobian(const LegPoint& point, const Vec4& q);

/// Element i holds d(dr/dq)/dq_i, so column j of element i is d2r/(dq_i dq_j).
std::array<Mat34, kJoints> point_hessian(const LegPoint& point, const Vec4& q);

Vec3 fk_com_upper(const Vec4& q, const RobotParams& params);
Vec3 fk_com_lower(const Vec4& q, const RobotParams& params);
Vec3 fk_tip(const Vec4& q, const RobotParams& params);
Vec3 fk(Body body, const Vec4& q, const RobotParams& params);

Mat34 jacobian_com(Body body, const Vec4& q, const RobotParams& params);
std::array<Mat34, kJoints> hessian_com(Body body, const Vec4& q, const RobotParams& params);

std::string_view to_string(Body body);

/// Denavit-Hartenberg row. Descriptive only: the kinematics above are
/// defined by the explicit rotation chain, which this table does not match.
struct DHRow
{
  double theta = 0.0;
  double d = 0.0;
  double a = 0.0;
  double alpha = 0.0;
};

std::vector<DHRow> dh_table(const RobotParams& params);

} // namespace legctl
