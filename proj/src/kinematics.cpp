#include "legctl/kinematics.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace legctl
{

void validate(const RobotParams& p)
{
  auto require = [](bool ok, const char* field, const char* what) {
    if (!ok)
    {
      throw InvalidArgument(std::string("RobotParams.") + field + " " + what);
    }
  };
  require(std::isfinite(p.len_upper) && p.len_upper > 0.0, "len_upper", "must be > 0");
  require(std::isfinite(p.len_lower) && p.len_lower > 0.0, "len_lower", "must be > 0");
  require(std::isfinite(p.com_upper) && p.com_upper > 0.0 && p.com_upper <= p.len_upper, "com_upper",
          "must lie in (0, len_upper]");
  require(std::isfinite(p.com_lower) && p.com_lower > 0.0 && p.com_lower <= p.len_lower, "com_lower",
          "must lie in (0, len_lower]");
  require(std::isfinite(p.mass_upper) && p.mass_upper > 0.0, "mass_upper", "must be > 0");
  require(std::isfinite(p.mass_lower) && p.mass_lower > 0.0, "mass_lower", "must be > 0");
  require(std::isfinite(p.gravity) && p.gravity >= 0.0, "gravity", "must be >= 0");
  require(std::isfinite(p.rotor_inertia) && p.rotor_inertia >= 0.0, "rotor_inertia", "must be >= 0");
}

namespace
{

// d^k/dx^k of sin and cos, evaluated exactly by cycling through the four phases.
double sin_derivative(double x, int k)
{
  switch (k % 4)
  {
  case 0: return std::sin(x);
  case 1: return std::cos(x);
  case 2: return -std::sin(x);
  default: return -std::cos(x);
  }
}

double cos_derivative(double x, int k)
{
  switch (k % 4)
  {
  case 0: return std::cos(x);
  case 1: return -std::sin(x);
  case 2: return -std::cos(x);
  default: return std::sin(x);
  }
}

// Mixed partial derivative of the chain position. orders[i] is the number of
// times q_i is differentiated.
Vec3 chain_derivative(const LegPoint& point, const Vec4& q, const std::array<int, kJoints>& orders)
{
  // Ry(-q1): each derivative picks up a factor -1 from the inner argument.
  const double y_sign = (orders[kHipY] % 2 == 0) ? 1.0 : -1.0;

  const int knee_order = orders[kKnee];
  const double s = sin_derivative(q[kKnee], knee_order);
  const double c = cos_derivative(q[kKnee], knee_order);
  const Vec3 local(point.along_lower * s, 0.0,
                   (knee_order == 0 ? point.along_upper : 0.0) + point.along_lower * c);

  return rot_axis_derivative(Axis::z, q[kHipZ], orders[kHipZ]) *
         (y_sign * rot_axis_derivative(Axis::y, -q[kHipY], orders[kHipY])) *
         rot_axis_derivative(Axis::x, q[kHipX], orders[kHipX]) * local;
}

} // namespace

Mat3 rot_axis_derivative(Axis axis, double angle, int order)
{
  const double c = cos_derivative(angle, order);
  const double s = sin_derivative(angle, order);
  const double one = order == 0 ? 1.0 : 0.0;
  Mat3 r;
  switch (axis)
  {
  case Axis::x:
    r << one, 0.0, 0.0,
         0.0, c, -s,
         0.0, s, c;
    break;
  case Axis::y:
    r << c, 0.0, s,
         0.0, one, 0.0,
         -s, 0.0, c;
    break;
  case Axis::z:
    r << c, -s, 0.0,
         s, c, 0.0,
         0.0, 0.0, one;
    break;
  }
  return r;
}

Mat3 rot_axis(Axis axis, double angle)
{
  return rot_axis_derivative(axis, angle, 0);
}

LegPoint leg_point(Body body, const RobotParams& params)
{
  switch (body)
  {
  case Body::upper: return {params.com_upper, 0.0};
  case Body::lower: return {params.len_upper, params.com_lower};
  case Body::tip: return {params.len_upper, params.len_lower};
  }
  return {};
}

Vec3 point_position(const LegPoint& point, const Vec4& q)
{
  return chain_derivative(point, q, {0, 0, 0, 0});
}

Mat34 point_jacobian(const LegPoint& point, const Vec4& q)
{
  Mat34 jac;
  for (int j = 0; j < kJoints; ++j)
  {
    std::array<int, kJoints> orders{};
    orders[j] = 1;
    jac.col(j) = chain_derivative(point, q, orders);
  }
  return jac;
}

std::array<Mat34, kJoints> point_hessian(const LegPoint& point, const Vec4& q)
{
  std::array<Mat34, kJoints> hess;
  for (int i = 0; i < kJoints; ++i)
  {
    for (int j = i; j < kJoints; ++j)
    {
      std::array<int, kJoints> orders{};
      orders[i] += 1;
      orders[j] += 1;
      const Vec3 d2 = chain_derivative(point, q, orders);
      hess[i].col(j) = d2;
      hess[j].col(i) = d2;
    }
  }
  return hess;
}

Vec3 fk_com_upper(const Vec4& q, const RobotParams& params)
{
  return point_position(leg_point(Body::upper, params), q);
}

Vec3 fk_com_lower(const Vec4& q, const RobotParams& params)
{
  return point_position(leg_point(Body::lower, params), q);
}

Vec3 fk_tip(const Vec4& q, const RobotParams& params)
{
  return point_position(leg_point(Body::tip, params), q);
}

Vec3 fk(Body body, const Vec4& q, const RobotParams& params)
{
  return point_position(leg_point(body, params), q);
}

Mat34 jacobian_com(Body body, const Vec4& q, const RobotParams& params)
{
  return point_jacobian(leg_point(body, params), q);
}

std::array<Mat34, kJoints> hessian_com(Body body, const Vec4& q, const RobotParams& params)
{
  return point_hessian(leg_point(body, params), q);
}

std::string_view to_string(Body body)
{
  switch (body)
  {
  case Body::upper: return "upper";
  case Body::lower: return "lower";
  case Body::tip: return "tip";
  }
  return "?";
}

std::vector<DHRow> dh_table(const RobotParams& params)
{
  constexpr double half_pi = std::numbers::pi / 2.0;
  return {
      {0.0, 0.0, 0.0, half_pi},
      {0.0, 0.0, 0.0, half_pi},
      {0.0, 0.0, params.len_upper, half_pi},
      {0.0, 0.0, params.len_lower, half_pi},
  };
}

} // namespace legctl
