#pragma once

#include <Eigen/Dense>

#include <array>
#include <stdexcept>
#include <string>

namespace legctl
{

inline constexpr int kJoints = 4;
inline constexpr int kThetas = 5;

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec5 = Eigen::Matrix<double, kThetas, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat5 = Eigen::Matrix<double, kThetas, kThetas>;
using Mat34 = Eigen::Matrix<double, 3, kJoints>;
using Mat45 = Eigen::Matrix<double, kJoints, kThetas>;
using Mat54 = Eigen::Matrix<double, kThetas, kJoints>;

/// Joint indices. Order matches the rotation application order of the chain:
/// hip about z, hip about y, hip about x, knee about y.
enum Joint : int
{
  kHipZ = 0,
  kHipY = 1,
  kHipX = 2,
  kKnee = 3,
};

/// Physical model of the leg. Links are point masses located along their
/// link axis.
struct RobotParams
{
  double len_upper = 0.4;      ///< hip to knee [m]
  double len_lower = 0.4;      ///< knee to tip [m]
  double com_upper = 0.2;      ///< hip to upper-link CoM [m]
  double com_lower = 0.2;      ///< knee to lower-link CoM [m]
  double mass_upper = 1.0;     ///< [kg]
  double mass_lower = 1.0;     ///< [kg]
  double gravity = 9.81;       ///< [m/s^2], acting along -z
  double rotor_inertia = 1e-3; ///< diagonal regularizer added to M [kg m^2]

  bool operator==(const RobotParams&) const = default;
};

/// Throws InvalidArgument naming the first violated field.
void validate(const RobotParams& params);

struct JointState
{
  Vec4 q = Vec4::Zero();
  Vec4 qd = Vec4::Zero();
  Vec4 qdd = Vec4::Zero();
};

struct Error : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error
{
  using Error::Error;
};

/// Raised when a mass matrix or innovation covariance cannot be factorized.
struct SingularMatrixError : Error
{
  using Error::Error;
};

/// Raised when a simulated state stops being finite.
struct InstabilityError : Error
{
  using Error::Error;
};

} // namespace legctl
