#include "legctl/oracles.hpp"

#include "legctl/dynamics.hpp"

namespace legctl::oracle
{

namespace
{

constexpr double kVelocityStep = 1e-3;

Vec4 momentum(const Vec4& q, const Vec4& qd, const RobotParams& params)
{
  Vec4 p;
  for (int j = 0; j < kJoints; ++j)
  {
    const Vec4 e = kVelocityStep * Vec4::Unit(j);
    p[j] = (lagrangian(q, qd + e, params) - lagrangian(q, qd - e, params)) / (2.0 * kVelocityStep);
  }
  return p;
}

} // namespace

Mat34 fd_jacobian(Body body, const Vec4& q, const RobotParams& params, double step)
{
  Mat34 jac;
  for (int j = 0; j < kJoints; ++j)
  {
    const Vec4 e = step * Vec4::Unit(j);
    jac.col(j) = (fk(body, q + e, params) - fk(body, q - e, params)) / (2.0 * step);
  }
  return jac;
}

Vec4 fd_gravity(const Vec4& q, const RobotParams& params, double step)
{
  Vec4 g;
  for (int j = 0; j < kJoints; ++j)
  {
    const Vec4 e = step * Vec4::Unit(j);
    g[j] = (potential_energy(q + e, params) - potential_energy(q - e, params)) / (2.0 * step);
  }
  return g;
}

Mat4 fd_mass_matrix_rate(const Vec4& q, const Vec4& qd, const RobotParams& params, double step)
{
  auto m_at = [&](double t) { return mass_matrix(q + t * qd, params); };
  // Five-point stencil.
  return (8.0 * (m_at(step) - m_at(-step)) - (m_at(2.0 * step) - m_at(-2.0 * step))) / (12.0 * step);
}

double lagrangian(const Vec4& q, const Vec4& qd, const RobotParams& params)
{
  const Vec3 v_upper = jacobian_com(Body::upper, q, params) * qd;
  const Vec3 v_lower = jacobian_com(Body::lower, q, params) * qd;
  const double kinetic = 0.5 * params.mass_upper * v_upper.squaredNorm() +
                         0.5 * params.mass_lower * v_lower.squaredNorm() +
                         0.5 * params.rotor_inertia * qd.squaredNorm();
  const double potential = params.gravity * (params.mass_upper * fk_com_upper(q, params).z() +
                                             params.mass_lower * fk_com_lower(q, params).z());
  return kinetic - potential;
}

Vec4 euler_lagrange_torque(const Vec4& q, const Vec4& qd, const Vec4& qdd, const RobotParams& params, double step)
{
  auto q_at = [&](double t) -> Vec4 { return q + t * qd + 0.5 * t * t * qdd; };
  auto qd_at = [&](double t) -> Vec4 { return qd + t * qdd; };

  const Vec4 momentum_rate =
      (momentum(q_at(step), qd_at(step), params) - momentum(q_at(-step), qd_at(-step), params)) / (2.0 * step);

  Vec4 dl_dq;
  for (int j = 0; j < kJoints; ++j)
  {
    const Vec4 e = step * Vec4::Unit(j);
    dl_dq[j] = (lagrangian(q + e, qd, params) - lagrangian(q - e, qd, params)) / (2.0 * step);
  }
  return momentum_rate - dl_dq;
}

Vec4 random_vec4(std::mt19937_64& rng, double scale)
{
  std::uniform_real_distribution<double> dist(-scale, scale);
  Vec4 v;
  for (int j = 0; j < kJoints; ++j)
  {
    v[j] = dist(rng);
  }
  return v;
}

} // namespace legctl::oracle
