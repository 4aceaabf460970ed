#pragma once

#include "legctl/types.hpp"

namespace legctl
{

/**
 * Linear factorization of the inverse dynamics in the CoM distances.
 *
 * Writing r_upper = cu f(q) and r_lower = Lu f(q) + cl h(q), with f and h the
 * unit axes of the two links, the inverse dynamics splits into five columns
 * whose coefficients are (cu^2, cu, cl^2, cl, 1):
 *
 *   col 0  mu  * [M_ff qdd + C_ff qd]
 *   col 1  mu g * grad f_z
 *   col 2  ml  * [M_hh qdd + C_hh qd]
 *   col 3  2 ml Lu * [M_fh qdd + C_fh qd] + ml g * grad h_z
 *   col 4  ml Lu^2 * [M_ff qdd + C_ff qd] + ml g Lu * grad f_z + rotor_inertia qdd
 *
 * where M_ab = sym(J_a^T J_b) and C_ab is its Christoffel Coriolis matrix.
 * No column depends on com_upper or com_lower.
 */
using RegressorMatrix = Mat45;

/// Adaptive scale factors (a, b, c, d, e) multiplying the nominal CoM terms.
using ThetaScales = Vec5;

/// (com_upper^2, com_upper, com_lower^2, com_lower, 1).
Vec5 theta_nominal(const RobotParams& params);

/// Phi with Phi * theta_nominal(params) == inverse_dynamics(params).
RegressorMatrix regressor_raw(const Vec4& q, const Vec4& qd, const Vec4& qdd, const RobotParams& params);

/// Phi' = Phi diag(theta_nominal), so Phi' * ones == inverse_dynamics.
RegressorMatrix regressor_scaled(const Vec4& q, const Vec4& qd, const Vec4& qdd, const RobotParams& params);

/// Scale vector that maps the nominal model onto `actual`.
/// Throws InvalidArgument unless the two differ only in their CoM distances.
ThetaScales true_theta_scales(const RobotParams& nominal, const RobotParams& actual);

} // namespace legctl
