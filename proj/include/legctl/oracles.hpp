#pragma once

#include "legctl/kinematics.hpp"
#include "legctl/types.hpp"

#include <random>

/// Finite-difference reference computations. None of these touch the
/// analytic derivative code paths they are used to check.
namespace legctl::oracle
{

/// Central differences of the forward kinematics.
Mat34 fd_jacobian(Body body, const Vec4& q, const RobotParams& params, double step = 1e-6);

/// Central differences of the potential energy g * sum m_b z_b.
Vec4 fd_gravity(const Vec4& q, const RobotParams& params, double step = 1e-6);

/// dM/dt along q(t) = q + t qd, by five-point central differences of mass_matrix.
Mat4 fd_mass_matrix_rate(const Vec4& q, const Vec4& qd, const RobotParams& params, double step = 1e-3);

/// L(q, qd) = sum_b 1/2 m_b |J_b qd|^2 + 1/2 rotor_inertia |qd|^2 - P(q).
double lagrangian(const Vec4& q, const Vec4& qd, const RobotParams& params);

/**
 * d/dt(dL/dqd) - dL/dq by finite differences of the Lagrangian.
 *
 * The time and configuration derivatives use central differences with
 * `step`. dL/dqd uses a 1e-3 central difference, which is exact up to
 * rounding because L is quadratic in qd.
 */
Vec4 euler_lagrange_torque(const Vec4& q, const Vec4& qd, const Vec4& qdd, const RobotParams& params,
                           double step = 1e-6);

/// Uniform random joint vector with entries in [-scale, scale].
Vec4 random_vec4(std::mt19937_64& rng, double scale);

} // namespace legctl::oracle
