#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace legctl
{

/// Process exit codes of the command-line front end.
enum ExitCode : int
{
  kExitOk = 0,
  kExitUsage = 1, ///< usage, I/O, config or schema error; also a failed check
  kExitUnstable = 2,
};

struct SimulateOptions
{
  std::string config_path;
  std::string out_path; ///< empty or "-" writes the CSV to `out`
  std::optional<std::string> mode;
  bool no_adapt = false;
  std::optional<std::uint64_t> seed;
};

struct CheckOptions
{
  std::optional<std::string> params_path;
  std::uint64_t seed = 1;
};

struct IdentifyOptions
{
  std::string log_path;
  std::optional<double> rls_cov;
  std::optional<std::string> config_path; ///< nominal model and RLS settings
};

/// Runs the experiment and writes the CSV log. The summary goes to `out`
/// when the CSV goes to a file, to `err` otherwise.
int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err);

/// Runs the invariant suite and prints one line per check.
int cmd_check(const CheckOptions& options, std::ostream& out, std::ostream& err);

/// Replays the estimator over a logged run: row k's observed state is
/// regressed against the torque applied from row k-1.
int cmd_identify(const IdentifyOptions& options, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to one subcommand.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace legctl
