#include "legctl/estimator.hpp"

#include <cmath>
#include <sstream>

namespace legctl
{

namespace
{
constexpr double kMaxInnovationCondition = 1e12;
}

void validate(const RlsConfig& config)
{
  if (!config.initial_theta.allFinite())
  {
    throw InvalidArgument("RlsConfig.initial_theta must be finite");
  }
  if (!(std::isfinite(config.initial_cov_scale) && config.initial_cov_scale > 0.0))
  {
    throw InvalidArgument("RlsConfig.initial_cov_scale must be > 0");
  }
  if (!(config.forgetting > 0.0 && config.forgetting <= 1.0))
  {
    throw InvalidArgument("RlsConfig.forgetting must lie in (0, 1]");
  }
}

RlsState rls_init(const RlsConfig& config)
{
  validate(config);
  RlsState state;
  state.theta_hat = config.initial_theta;
  state.cov = config.initial_cov_scale * Mat5::Identity();
  state.gain.setZero();
  state.tick = 0;
  state.forgetting = config.forgetting;
  return state;
}

RlsState rls_update(const RlsState& state, const RegressorMatrix& phi, const Vec4& tau)
{
  if (!phi.allFinite() || !tau.allFinite())
  {
    throw InvalidArgument("rls_update: regressor and torque must be finite");
  }

  const double lambda = state.forgetting;
  const Mat54 pat = state.cov * phi.transpose();
  Mat4 innovation = lambda * Mat4::Identity() + phi * pat;
  innovation = 0.5 * (innovation + innovation.transpose()).eval();

  const Eigen::SelfAdjointEigenSolver<Mat4> eig(innovation, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kMaxInnovationCondition)
  {
    std::ostringstream msg;
    msg << "rls_update: innovation covariance is singular (eigenvalues " << lo << " .. " << hi << ")";
    throw SingularMatrixError(msg.str());
  }

  // K = P A^T S^-1, computed as (S^-1 A P)^T since S and P are symmetric.
  const Mat54 gain = innovation.llt().solve(pat.transpose()).transpose();

  RlsState next;
  next.gain = gain;
  next.theta_hat = state.theta_hat + gain * (tau - phi * state.theta_hat);
  Mat5 cov = (state.cov - gain * phi * state.cov) / lambda;
  next.cov = 0.5 * (cov + cov.transpose());
  next.tick = state.tick + 1;
  next.forgetting = lambda;
  return next;
}

Vec5 rls_batch_oracle(const std::vector<RlsSample>& samples, const RlsConfig& config)
{
  validate(config);
  if (samples.empty())
  {
    throw InvalidArgument("rls_batch_oracle: at least one sample is required");
  }
  const double prior = 1.0 / config.initial_cov_scale;
  Mat5 normal = prior * Mat5::Identity();
  Vec5 rhs = prior * config.initial_theta;
  for (const auto& [phi, tau] : samples)
  {
    normal.noalias() += phi.transpose() * phi;
    rhs.noalias() += phi.transpose() * tau;
  }
  const Eigen::LDLT<Mat5> ldlt(normal);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || ldlt.vectorD().minCoeff() <= 0.0)
  {
    throw SingularMatrixError("rls_batch_oracle: normal matrix is singular");
  }
  return ldlt.solve(rhs);
}

} // namespace legctl
