#include "legctl/dynamics.hpp"

#include "legctl/kinematics.hpp"

#include <sstream>

namespace legctl
{

namespace
{

struct LinkMass
{
  Body body;
  double mass;
};

std::array<LinkMass, 2> link_masses(const RobotParams& params)
{
  return {LinkMass{Body::upper, params.mass_upper}, LinkMass{Body::lower, params.mass_lower}};
}

// Cholesky pivots are square roots of the factorized diagonal, so a pivot
// ratio of 1e-8 corresponds to a condition number of about 1e16.
constexpr double kRelativePivotFloor = 1e-8;

} // namespace

Mat4 mass_matrix(const Vec4& q, const RobotParams& params)
{
  Mat4 m = params.rotor_inertia * Mat4::Identity();
  for (const auto& link : link_masses(params))
  {
    const Mat34 jac = jacobian_com(link.body, q, params);
    m.noalias() += link.mass * jac.transpose() * jac;
  }
  return m;
}

MatrixPartials mass_matrix_partials(const Vec4& q, const RobotParams& params)
{
  MatrixPartials dm;
  dm.fill(Mat4::Zero());
  for (const auto& link : link_masses(params))
  {
    const Mat34 jac = jacobian_com(link.body, q, params);
    const auto hess = hessian_com(link.body, q, params);
    for (int i = 0; i < kJoints; ++i)
    {
      const Mat4 half = hess[i].transpose() * jac;
      dm[i] += link.mass * (half + half.transpose());
    }
  }
  return dm;
}

Mat4 christoffel_coriolis(const MatrixPartials& dm, const Vec4& qd)
{
  Mat4 c = Mat4::Zero();
  for (int k = 0; k < kJoints; ++k)
  {
    for (int j = 0; j < kJoints; ++j)
    {
      double sum = 0.0;
      for (int i = 0; i < kJoints; ++i)
      {
        sum += 0.5 * (dm[i](k, j) + dm[j](k, i) - dm[k](i, j)) * qd[i];
      }
      c(k, j) = sum;
    }
  }
  return c;
}

Mat4 coriolis_matrix(const Vec4& q, const Vec4& qd, const RobotParams& params)
{
  return christoffel_coriolis(mass_matrix_partials(q, params), qd);
}

Vec4 gravity_vector(const Vec4& q, const RobotParams& params)
{
  Vec4 g = Vec4::Zero();
  for (const auto& link : link_masses(params))
  {
    g += link.mass * params.gravity * jacobian_com(link.body, q, params).row(2).transpose();
  }
  return g;
}

double potential_energy(const Vec4& q, const RobotParams& params)
{
  double p = 0.0;
  for (const auto& link : link_masses(params))
  {
    p += link.mass * params.gravity * fk(link.body, q, params).z();
  }
  return p;
}

double kinetic_energy(const Vec4& q, const Vec4& qd, const RobotParams& params)
{
  return 0.5 * qd.dot(mass_matrix(q, params) * qd);
}

double total_energy(const Vec4& q, const Vec4& qd, const RobotParams& params)
{
  return kinetic_energy(q, qd, params) + potential_energy(q, params);
}

DynTerms dynamics_terms(const Vec4& q, const Vec4& qd, const RobotParams& params)
{
  // Same sums as mass_matrix, mass_matrix_partials and gravity_vector, with
  // each link's Jacobian and Hessian evaluated once.
  Mat4 m = params.rotor_inertia * Mat4::Identity();
  MatrixPartials dm;
  dm.fill(Mat4::Zero());
  Vec4 g = Vec4::Zero();
  for (const auto& link : link_masses(params))
  {
    const Mat34 jac = jacobian_com(link.body, q, params);
    const auto hess = hessian_com(link.body, q, params);
    m.noalias() += link.mass * jac.transpose() * jac;
    for (int i = 0; i < kJoints; ++i)
    {
      const Mat4 half = hess[i].transpose() * jac;
      dm[i] += link.mass * (half + half.transpose());
    }
    g += link.mass * params.gravity * jac.row(2).transpose();
  }
  return {m, christoffel_coriolis(dm, qd) * qd, g};
}

Vec4 inverse_dynamics(const Vec4& q, const Vec4& qd, const Vec4& qdd, const RobotParams& params)
{
  const DynTerms terms = dynamics_terms(q, qd, params);
  return terms.m_matrix * qdd + terms.coriolis_vec + terms.gravity_vec;
}

Vec4 forward_dynamics(const Vec4& q, const Vec4& qd, const Vec4& tau, const RobotParams& params)
{
  const DynTerms terms = dynamics_terms(q, qd, params);
  const Eigen::LLT<Mat4> llt(terms.m_matrix);
  if (llt.info() != Eigen::Success)
  {
    std::ostringstream msg;
    msg << "mass matrix is not positive definite at q = " << q.transpose();
    throw SingularMatrixError(msg.str());
  }
  const Vec4 pivots = llt.matrixL().toDenseMatrix().diagonal();
  if (pivots.minCoeff() <= kRelativePivotFloor * pivots.maxCoeff())
  {
    std::ostringstream msg;
    msg << "mass matrix is numerically singular at q = " << q.transpose();
    throw SingularMatrixError(msg.str());
  }
  return llt.solve(tau - terms.coriolis_vec - terms.gravity_vec);
}

} // namespace legctl
