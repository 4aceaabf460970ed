#include "legctl/regressor.hpp"

#include "legctl/dynamics.hpp"
#include "legctl/kinematics.hpp"

#include <string>

namespace legctl
{

namespace
{

struct Axial
{
  Mat34 jac;
  std::array<Mat34, kJoints> hess;
};

Axial axial(const LegPoint& point, const Vec4& q)
{
  return {point_jacobian(point, q), point_hessian(point, q)};
}

// Generalized force of the symmetric kinetic block sym(J_a^T J_b):
// M_ab qdd + C_ab qd.
Vec4 block_force(const Axial& a, const Axial& b, const Vec4& qd, const Vec4& qdd)
{
  const Mat4 cross = a.jac.transpose() * b.jac;
  const Mat4 m = 0.5 * (cross + cross.transpose());
  MatrixPartials dm;
  for (int i = 0; i < kJoints; ++i)
  {
    const Mat4 half = a.hess[i].transpose() * b.jac + a.jac.transpose() * b.hess[i];
    dm[i] = 0.5 * (half + half.transpose());
  }
  return m * qdd + christoffel_coriolis(dm, qd) * qd;
}

} // namespace

Vec5 theta_nominal(const RobotParams& params)
{
  Vec5 t;
  t << params.com_upper * params.com_upper, params.com_upper, params.com_lower * params.com_lower,
      params.com_lower, 1.0;
  return t;
}

RegressorMatrix regressor_raw(const Vec4& q, const Vec4& qd, const Vec4& qdd, const RobotParams& params)
{
  const Axial f = axial({1.0, 0.0}, q);
  const Axial h = axial({0.0, 1.0}, q);

  const Vec4 force_ff = block_force(f, f, qd, qdd);
  const Vec4 force_hh = block_force(h, h, qd, qdd);
  const Vec4 force_fh = block_force(f, h, qd, qdd);
  const Vec4 grad_fz = f.jac.row(2).transpose();
  const Vec4 grad_hz = h.jac.row(2).transpose();

  const double mu = params.mass_upper;
  const double ml = params.mass_lower;
  const double lu = params.len_upper;
  const double g = params.gravity;

  RegressorMatrix phi;
  phi.col(0) = mu * force_ff;
  phi.col(1) = mu * g * grad_fz;
  phi.col(2) = ml * force_hh;
  phi.col(3) = 2.0 * ml * lu * force_fh + ml * g * grad_hz;
  phi.col(4) = ml * lu * lu * force_ff + ml * g * lu * grad_fz + params.rotor_inertia * qdd;
  return phi;
}

RegressorMatrix regressor_scaled(const Vec4& q, const Vec4& qd, const Vec4& qdd, const RobotParams& params)
{
  return regressor_raw(q, qd, qdd, params) * theta_nominal(params).asDiagonal();
}

ThetaScales true_theta_scales(const RobotParams& nominal, const RobotParams& actual)
{
  auto require_same = [](double a, double b, const char* field) {
    if (a != b)
    {
      throw InvalidArgument(std::string("nominal and actual parameters differ in ") + field +
                            "; only com_upper and com_lower may differ");
    }
  };
  require_same(nominal.len_upper, actual.len_upper, "len_upper");
  require_same(nominal.len_lower, actual.len_lower, "len_lower");
  require_same(nominal.mass_upper, actual.mass_upper, "mass_upper");
  require_same(nominal.mass_lower, actual.mass_lower, "mass_lower");
  require_same(nominal.gravity, actual.gravity, "gravity");
  require_same(nominal.rotor_inertia, actual.rotor_inertia, "rotor_inertia");

  const double su = actual.com_upper / nominal.com_upper;
  const double sl = actual.com_lower / nominal.com_lower;
  ThetaScales t;
  t << su * su, su, sl * sl, sl, 1.0;
  return t;
}

} // namespace legctl
