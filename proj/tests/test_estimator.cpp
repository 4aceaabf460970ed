#include "legctl/estimator.hpp"
#include "legctl/oracles.hpp"
#include "legctl/regressor.hpp"
#include "legctl/simulation.hpp"
#include "legctl/trajectory.hpp"
#include "test_helpers.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>

using namespace legctl;
using legctl::test::kPi;
using legctl::test::max_abs;

TEST_CASE("rls_init")
{
  const RlsState s = rls_init(RlsConfig{});
  CHECK(max_abs(s.theta_hat - Vec5::Ones()) == 0.0);
  CHECK(max_abs(s.cov - 1e3 * Mat5::Identity()) == 0.0);

  RlsConfig c;
  c.initial_theta = Vec5(1, 2, 3, 4, 5);
  CHECK(max_abs(rls_init(c).theta_hat - c.initial_theta) == 0.0);

  c.initial_cov_scale = 0.0;
  CHECK_THROWS_AS(rls_init(c), InvalidArgument);
  c = RlsConfig{};
  c.forgetting = 1.5;
  CHECK_THROWS_AS(rls_init(c), InvalidArgument);
}

TEST_CASE("rls_update: single-parameter hand calculation")
{
  // Only theta_0 is observed, through the first output, so the update
  // decouples to the scalar case theta0 = 0, P0 = 1, phi = 1, tau = 1.
  RlsConfig c;
  c.initial_theta = Vec5::Zero();
  c.initial_cov_scale = 1.0;
  RegressorMatrix a = RegressorMatrix::Zero();
  a(0, 0) = 1.0;
  const RlsState s = rls_update(rls_init(c), a, Vec4(1, 0, 0, 0));
  CHECK(s.gain(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s.theta_hat[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s.cov(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s.theta_hat.tail<4>().norm() == 0.0);
  CHECK(s.tick == 1);
}

TEST_CASE("rls_update: zero innovation leaves theta and shrinks P")
{
  const RobotParams p;
  const RegressorMatrix phi = regressor_scaled(Vec4(0.1, 0.2, 0.3, 0.4), Vec4(1, -1, 0.5, 0.2), Vec4(2, 1, -1, 3), p);
  const RlsState s0 = rls_init(RlsConfig{});
  const RlsState s1 = rls_update(s0, phi, phi * s0.theta_hat);
  CHECK(max_abs(s1.theta_hat - s0.theta_hat) <= 1e-12);
  CHECK(s1.cov.trace() < s0.cov.trace());
  CHECK(max_abs(s1.cov - s1.cov.transpose()) == 0.0);
}

TEST_CASE("rls_update: ill-conditioned innovation covariance is rejected")
{
  RlsConfig c;
  c.initial_cov_scale = 1e15;
  RegressorMatrix a = RegressorMatrix::Zero();
  a(0, 0) = 1.0;
  CHECK_THROWS_AS(rls_update(rls_init(c), a, Vec4::Zero()), SingularMatrixError);
  CHECK_THROWS_AS(rls_update(rls_init(RlsConfig{}), a, Vec4::Constant(std::nan(""))), InvalidArgument);
}

TEST_CASE("rls_update: noise-free samples along an exciting trajectory recover theta")
{
  const RobotParams nominal;
  const Vec5 theta_true(1.44, 1.2, 0.64, 0.8, 1.0);
  const Trajectory traj = Trajectory::excitation(Vec4(0, 0.5, 0, 0.8), 8, 2.0, 4.0, 3);
  RlsConfig c;
  c.initial_cov_scale = kIdentificationCovScale;
  RlsState s = rls_init(c);
  for (int k = 0; k < 200; ++k)
  {
    const TrajectoryPoint pt = traj.sample(0.02 * k);
    const RegressorMatrix phi = regressor_scaled(pt.q_ref, pt.qd_ref, pt.qdd_ref, nominal);
    s = rls_update(s, phi, phi * theta_true);
  }
  CHECK((s.theta_hat - theta_true).lpNorm<Eigen::Infinity>() <= 1e-6);
}

TEST_CASE("rls_batch_oracle equals sequential updates")
{
  const RobotParams nominal;
  std::mt19937_64 rng(31);
  std::normal_distribution<double> noise(0.0, 0.1);
  const RlsConfig c;
  RlsState s = rls_init(c);
  std::vector<RlsSample> samples;
  for (int k = 0; k < 300; ++k)
  {
    const RegressorMatrix phi = regressor_scaled(oracle::random_vec4(rng, kPi), oracle::random_vec4(rng, 2.0),
                                                 oracle::random_vec4(rng, 5.0), nominal);
    Vec4 tau = phi * Vec5(1.1, 0.9, 1.2, 1.0, 0.95);
    for (int j = 0; j < kJoints; ++j)
    {
      tau[j] += noise(rng);
    }
    samples.emplace_back(phi, tau);
    s = rls_update(s, phi, tau);
    CHECK(Eigen::SelfAdjointEigenSolver<Mat5>(s.cov).eigenvalues().minCoeff() > 0.0);
  }
  CHECK((s.theta_hat - rls_batch_oracle(samples, c)).lpNorm<Eigen::Infinity>() <= 1e-8);
}

TEST_CASE("rls_batch_oracle: a weak prior lets one sample dominate")
{
  Mat45 a = Mat45::Zero();
  a.leftCols<4>() = Mat4::Identity();
  RlsConfig c;
  c.initial_cov_scale = 1e12;
  const Vec5 theta = rls_batch_oracle({{a, Vec4(2, 3, 4, 5)}}, c);
  CHECK(max_abs(theta.head<4>() - Vec4(2, 3, 4, 5)) <= 1e-9);
  CHECK(theta[4] == doctest::Approx(1.0));
}

TEST_CASE("rls_batch_oracle: preconditions")
{
  CHECK_THROWS_AS(rls_batch_oracle({}, RlsConfig{}), InvalidArgument);
}
