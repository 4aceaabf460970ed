#pragma once

#include "legctl/types.hpp"

#include <array>

namespace legctl
{

/// Partial derivatives of a joint-space matrix: element i is dM/dq_i.
using MatrixPartials = std::array<Mat4, kJoints>;

struct DynTerms
{
  Mat4 m_matrix;
  Vec4 coriolis_vec; ///< C(q, qd) qd
  Vec4 gravity_vec;
};

/// M(q) = sum_b m_b J_b^T J_b + rotor_inertia I over the two link CoMs.
Mat4 mass_matrix(const Vec4& q, const RobotParams& params);

/// Analytic dM/dq_i, built from the closed-form CoM Hessians.
MatrixPartials mass_matrix_partials(const Vec4& q, const RobotParams& params);

/// Coriolis matrix from Christoffel symbols of the first kind:
/// C_kj = sum_i 1/2 (dM_kj/dq_i + dM_ki/dq_j - dM_ij/dq_k) qd_i.
/// With this choice Mdot - 2C is skew-symmetric.
Mat4 christoffel_coriolis(const MatrixPartials& dm, const Vec4& qd);

Mat4 coriolis_matrix(const Vec4& q, const Vec4& qd, const RobotParams& params);

/// dP/dq with P = g * sum_b m_b z_b(q).
Vec4 gravity_vector(const Vec4& q, const RobotParams& params);

double potential_energy(const Vec4& q, const RobotParams& params);
double kinetic_energy(const Vec4& q, const Vec4& qd, const RobotParams& params);
double total_energy(const Vec4& q, const Vec4& qd, const RobotParams& params);

DynTerms dynamics_terms(const Vec4& q, const Vec4& qd, const RobotParams& params);

/// tau = M qdd + C qd + G.
Vec4 inverse_dynamics(const Vec4& q, const Vec4& qd, const Vec4& qdd, const RobotParams& params);

/// Solves M qdd = tau - C qd - G with a Cholesky factorization.
/// Throws SingularMatrixError when M is not numerically positive definite,
/// which can only happen with rotor_inertia == 0.
Vec4 forward_dynamics(const Vec4& q, const Vec4& qd, const Vec4& tau, const RobotParams& params);

} // namespace legctl
