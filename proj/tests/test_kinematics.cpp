#include "legctl/kinematics.hpp"
#include "legctl/oracles.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

using namespace legctl;
using legctl::test::kPi;
using legctl::test::max_abs;

TEST_CASE("rot_axis: identity at zero angle")
{
  CHECK(max_abs(rot_axis(Axis::z, 0.0) - Mat3::Identity()) == 0.0);
}

TEST_CASE("rot_axis: quarter turn about y maps z onto x")
{
  const Vec3 v = rot_axis(Axis::y, kPi / 2) * Vec3(0, 0, 0.7);
  CHECK(max_abs(v - Vec3(0.7, 0, 0)) < 1e-15);
}

TEST_CASE("rot_axis: opposite angles cancel")
{
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> angle(-10.0, 10.0);
  for (int k = 0; k < 50; ++k)
  {
    const double a = angle(rng);
    for (const Axis axis : {Axis::x, Axis::y, Axis::z})
    {
      CHECK(max_abs(rot_axis(axis, a) * rot_axis(axis, -a) - Mat3::Identity()) < 1e-14);
    }
  }
}

TEST_CASE("rot_axis_derivative matches finite differences for orders 1 to 3")
{
  const double a = 0.37;
  const double h = 1e-4;
  for (const Axis axis : {Axis::x, Axis::y, Axis::z})
  {
    CHECK(max_abs(rot_axis_derivative(axis, a, 0) - rot_axis(axis, a)) == 0.0);
    for (int order = 1; order <= 3; ++order)
    {
      const Mat3 fd = (rot_axis_derivative(axis, a + h, order - 1) - rot_axis_derivative(axis, a - h, order - 1)) / (2 * h);
      CHECK(max_abs(rot_axis_derivative(axis, a, order) - fd) < 1e-7);
    }
  }
}

TEST_CASE("fk_com_upper")
{
  const RobotParams p;
  CHECK(max_abs(fk_com_upper(Vec4::Zero(), p) - Vec3(0, 0, 0.2)) == 0.0);
  CHECK(max_abs(fk_com_upper(Vec4(0, kPi / 2, 0, 0), p) - Vec3(-0.2, 0, 0)) < 1e-15);

  std::mt19937_64 rng(5);
  for (int k = 0; k < 100; ++k)
  {
    CHECK(fk_com_upper(oracle::random_vec4(rng, kPi), p).norm() == doctest::Approx(p.com_upper).epsilon(1e-14));
  }
}

TEST_CASE("fk_com_lower")
{
  const RobotParams p;
  CHECK(max_abs(fk_com_lower(Vec4::Zero(), p) - Vec3(0, 0, 0.6)) < 1e-15);
  CHECK(max_abs(fk_com_lower(Vec4(0, 0, 0, kPi / 2), p) - Vec3(0.2, 0, 0.4)) < 1e-15);

  std::mt19937_64 rng(6);
  for (int k = 0; k < 100; ++k)
  {
    CHECK(fk_com_lower(oracle::random_vec4(rng, kPi), p).norm() <= p.len_upper + p.com_lower + 1e-15);
  }
}

TEST_CASE("fk_tip")
{
  const RobotParams p;
  CHECK(max_abs(fk_tip(Vec4::Zero(), p) - Vec3(0, 0, 0.8)) < 1e-15);
  CHECK(max_abs(fk_tip(Vec4(0, 0, 0, kPi / 2), p) - Vec3(p.len_lower, 0, p.len_upper)) < 1e-15);
  CHECK(max_abs(fk_tip(Vec4(kPi / 2, 0, 0, kPi / 2), p) - Vec3(0, p.len_lower, p.len_upper)) < 1e-15);
}

TEST_CASE("fk dispatches on body")
{
  const RobotParams p;
  const Vec4 q(0.1, -0.2, 0.3, 0.4);
  CHECK(max_abs(fk(Body::upper, q, p) - fk_com_upper(q, p)) == 0.0);
  CHECK(max_abs(fk(Body::lower, q, p) - fk_com_lower(q, p)) == 0.0);
  CHECK(max_abs(fk(Body::tip, q, p) - fk_tip(q, p)) == 0.0);
  CHECK(to_string(Body::lower) == "lower");
}

TEST_CASE("jacobian_com: hip-z column vanishes when the point is on the z axis")
{
  const RobotParams p;
  CHECK(jacobian_com(Body::upper, Vec4::Zero(), p).col(kHipZ).norm() == 0.0);
}

TEST_CASE("jacobian_com: tip hip-y column at upright")
{
  const RobotParams p;
  const Vec3 col = jacobian_com(Body::tip, Vec4::Zero(), p).col(kHipY);
  CHECK(max_abs(col - Vec3(-(p.len_upper + p.len_lower), 0, 0)) < 1e-15);
}

TEST_CASE("jacobian_com matches central finite differences")
{
  const RobotParams p;
  std::mt19937_64 rng(7);
  for (int k = 0; k < 50; ++k)
  {
    const Vec4 q = oracle::random_vec4(rng, kPi);
    for (const Body body : {Body::upper, Body::lower, Body::tip})
    {
      CHECK(max_abs(jacobian_com(body, q, p) - oracle::fd_jacobian(body, q, p)) < 1e-6);
    }
  }
}

TEST_CASE("hessian_com matches finite differences of the Jacobian")
{
  const RobotParams p;
  std::mt19937_64 rng(8);
  const double h = 1e-6;
  for (int k = 0; k < 20; ++k)
  {
    const Vec4 q = oracle::random_vec4(rng, kPi);
    const auto hess = hessian_com(Body::lower, q, p);
    for (int i = 0; i < kJoints; ++i)
    {
      const Vec4 dq = h * Vec4::Unit(i);
      const Mat34 fd = (jacobian_com(Body::lower, q + dq, p) - jacobian_com(Body::lower, q - dq, p)) / (2 * h);
      CHECK(max_abs(hess[i] - fd) < 1e-7);
    }
  }
}

TEST_CASE("dh_table has one row per joint")
{
  CHECK(dh_table(RobotParams{}).size() == 4);
}

TEST_CASE("validate rejects non-physical parameters")
{
  RobotParams p;
  CHECK_NOTHROW(validate(p));
  p.com_upper = 0.5;
  CHECK_THROWS_AS(validate(p), InvalidArgument);
  p = RobotParams{};
  p.mass_lower = -1;
  CHECK_THROWS_AS(validate(p), InvalidArgument);
  p = RobotParams{};
  p.rotor_inertia = -1e-3;
  CHECK_THROWS_AS(validate(p), InvalidArgument);
}
