#pragma once

#include "legctl/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace legctl
{

enum class Comparison
{
  at_most,  ///< passes when measured <= bound
  at_least, ///< passes when measured >= bound
};

struct CheckResult
{
  std::string module;
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  Comparison comparison = Comparison::at_most;
  bool passed = false;
  std::string detail; ///< failure reason or extra context
};

struct SuiteReport
{
  std::vector<CheckResult> checks;

  bool all_passed() const;
  const CheckResult* find(const std::string& name) const;
};

struct SuiteOptions
{
  /// Fault injection: zero this regressor column before the reconstruction check.
  std::optional<int> zero_regressor_column;
  /// Skip the closed-loop simulation checks (they dominate the runtime).
  bool skip_closed_loop = false;
};

/// Runs every structural property of kinematics, dynamics, regressor,
/// estimator, control and the simulation loop. Failures (including thrown
/// errors) are reported as entries, never thrown.
SuiteReport run_invariant_suite(const RobotParams& params, std::uint64_t seed, const SuiteOptions& options = {});

} // namespace legctl
