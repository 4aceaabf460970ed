#pragma once

#include "legctl/regressor.hpp"
#include "legctl/types.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace legctl
{

struct RlsConfig
{
  Vec5 initial_theta = Vec5::Ones();
  double initial_cov_scale = 1e3; ///< P0 = initial_cov_scale * I
  double forgetting = 1.0;        ///< lambda in (0, 1]
};

void validate(const RlsConfig& config);

/// Persistent memory of the recursive least-squares estimator.
struct RlsState
{
  Vec5 theta_hat = Vec5::Ones();
  Mat5 cov = Mat5::Identity();
  Mat54 gain = Mat54::Zero(); ///< gain of the most recent update
  std::uint64_t tick = 0;
  double forgetting = 1.0;
};

RlsState rls_init(const RlsConfig& config);

/**
 * One multi-output update with a 4x5 regressor A and torque sample tau:
 *
 *   S     = lambda I + A P A^T
 *   K     = P A^T S^-1
 *   theta = theta + K (tau - A theta)
 *   P     = (P - K A P) / lambda, then symmetrized
 *
 * Throws SingularMatrixError if S has condition number above 1e12.
 */
RlsState rls_update(const RlsState& state, const RegressorMatrix& phi, const Vec4& tau);

using RlsSample = std::pair<RegressorMatrix, Vec4>;

/// Regularized batch least squares equivalent to running rls_update over
/// `samples` with forgetting 1:
///   (sum A^T A + I / s) theta = sum A^T tau + theta_0 / s.
Vec5 rls_batch_oracle(const std::vector<RlsSample>& samples, const RlsConfig& config);

} // namespace legctl
