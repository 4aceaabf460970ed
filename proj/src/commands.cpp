#include "legctl/commands.hpp"

#include "legctl/config.hpp"
#include "legctl/csv_log.hpp"
#include "legctl/estimator.hpp"
#include "legctl/invariants.hpp"
#include "legctl/regressor.hpp"
#include "legctl/simulation.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

namespace legctl
{

namespace
{

std::string fmt17(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_vec(const Vec5& v)
{
  std::string s;
  for (int i = 0; i < v.size(); ++i)
  {
    s += (i ? " " : "") + fmt17(v[i]);
  }
  return s;
}

} // namespace

int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err)
{
  ExperimentConfig config;
  try
  {
    config = load_config(options.config_path);
    if (options.mode)
    {
      const auto mode = parse_control_law_mode(*options.mode);
      if (!mode)
      {
        err << "error: unknown --mode '" << *options.mode << "' (expected standard or paper-literal)\n";
        return kExitUsage;
      }
      config.mode = *mode;
    }
    if (options.no_adapt)
    {
      config.adaptation_on = false;
    }
    if (options.seed)
    {
      config.seed = *options.seed;
    }
  }
  catch (const Error& e)
  {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  std::vector<LogRecord> log;
  try
  {
    log = run_experiment(config);
  }
  catch (const InstabilityError& e)
  {
    err << "simulation unstable: " << e.what() << "\n";
    return kExitUnstable;
  }
  catch (const SingularMatrixError& e)
  {
    err << "simulation unstable: " << e.what() << "\n";
    return kExitUnstable;
  }
  catch (const Error& e)
  {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  const bool to_stdout = options.out_path.empty() || options.out_path == "-";
  if (to_stdout)
  {
    write_csv(out, log);
  }
  else
  {
    std::ofstream file(options.out_path);
    if (!file)
    {
      err << "error: cannot open " << options.out_path << " for writing\n";
      return kExitUsage;
    }
    write_csv(file, log);
    file.close();
    if (!file)
    {
      err << "error: failed writing " << options.out_path << "\n";
      return kExitUsage;
    }
  }

  double max_tracking = 0.0;
  for (const auto& r : log)
  {
    max_tracking = std::max(max_tracking, (r.q - r.q_ref).cwiseAbs().maxCoeff());
  }
  std::ostream& summary = to_stdout ? err : out;
  summary << "records: " << log.size() << "\n"
          << "max_tracking_error: " << fmt17(max_tracking) << "\n"
          << "initial_theta_err_sq: " << fmt17(log.front().theta_error_sq) << "\n"
          << "final_theta_err_sq: " << fmt17(log.back().theta_error_sq) << "\n"
          << "final_theta: " << fmt_vec(log.back().theta_hat) << "\n";
  return kExitOk;
}

int cmd_check(const CheckOptions& options, std::ostream& out, std::ostream& err)
{
  RobotParams params;
  if (options.params_path)
  {
    try
    {
      params = load_config(*options.params_path).nominal_params;
    }
    catch (const Error& e)
    {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    }
  }

  const SuiteReport report = run_invariant_suite(params, options.seed);
  char line[256];
  std::snprintf(line, sizeof line, "%-10s %-36s %-13s %-2s %-13s %s\n", "module", "check", "measured", "", "bound",
                "status");
  out << line;
  for (const auto& c : report.checks)
  {
    std::snprintf(line, sizeof line, "%-10s %-36s %-13.6g %-2s %-13.6g %s", c.module.c_str(), c.name.c_str(),
                  c.measured, c.comparison == Comparison::at_most ? "<=" : ">=", c.bound, c.passed ? "PASS" : "FAIL");
    out << line;
    if (!c.detail.empty())
    {
      out << "  (" << c.detail << ")";
    }
    out << "\n";
  }
  const auto failed = std::count_if(report.checks.begin(), report.checks.end(), [](const auto& c) { return !c.passed; });
  out << report.checks.size() - static_cast<std::size_t>(failed) << "/" << report.checks.size() << " checks passed\n";
  return failed == 0 ? kExitOk : kExitUsage;
}

int cmd_identify(const IdentifyOptions& options, std::ostream& out, std::ostream& err)
{
  RobotParams nominal;
  RlsConfig rls;
  try
  {
    if (options.config_path)
    {
      const ExperimentConfig config = load_config(*options.config_path);
      nominal = config.nominal_params;
      rls = config.rls;
    }
    if (options.rls_cov)
    {
      rls.initial_cov_scale = *options.rls_cov;
    }
    validate(rls);
  }
  catch (const Error& e)
  {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  std::vector<LogRecord> log;
  try
  {
    std::ifstream in(options.log_path);
    if (!in)
    {
      err << "error: cannot open " << options.log_path << "\n";
      return kExitUsage;
    }
    log = read_csv(in);
  }
  catch (const SchemaError& e)
  {
    err << "error: schema mismatch in " << options.log_path << ": " << e.what() << "\n";
    return kExitUsage;
  }
  if (log.size() < 2)
  {
    err << "error: " << options.log_path << " needs at least two rows to replay\n";
    return kExitUsage;
  }

  RlsState state = rls_init(rls);
  double sum_sq = 0.0;
  std::size_t used = 0;
  std::size_t skipped = 0;
  for (std::size_t k = 1; k < log.size(); ++k)
  {
    const RegressorMatrix phi = regressor_scaled(log[k].q, log[k].qd, log[k].qdd, nominal);
    try
    {
      state = rls_update(state, phi, log[k - 1].tau);
      ++used;
    }
    catch (const Error&)
    {
      ++skipped;
    }
  }
  for (std::size_t k = 1; k < log.size(); ++k)
  {
    const RegressorMatrix phi = regressor_scaled(log[k].q, log[k].qd, log[k].qdd, nominal);
    sum_sq += (log[k - 1].tau - phi * state.theta_hat).squaredNorm();
  }
  const RegressorMatrix last_phi = regressor_scaled(log.back().q, log.back().qd, log.back().qdd, nominal);
  const double final_residual = (log[log.size() - 2].tau - last_phi * state.theta_hat).norm();

  out << "samples: " << used << "\n";
  if (skipped > 0)
  {
    out << "skipped_singular_updates: " << skipped << "\n";
  }
  out << "theta: " << fmt_vec(state.theta_hat) << "\n"
      << "final_residual_norm: " << fmt17(final_residual) << "\n"
      << "rms_residual: " << fmt17(std::sqrt(sum_sq / static_cast<double>(log.size() - 1))) << "\n";
  return kExitOk;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Adaptive computed-torque simulation of a 4-DoF leg", "legctl"};
  app.require_subcommand(1);

  SimulateOptions sim;
  std::string sim_mode;
  std::uint64_t sim_seed = 0;
  auto* simulate = app.add_subcommand("simulate", "Run a closed-loop experiment and write its CSV log");
  simulate->add_option("config", sim.config_path, "Experiment config file")->required();
  simulate->add_option("--out", sim.out_path, "CSV output path (default: standard output)");
  auto* mode_opt = simulate->add_option("--mode", sim_mode, "Control law")
                       ->check(CLI::IsMember({"standard", "paper-literal", "paper_literal"}));
  simulate->add_flag("--no-adapt", sim.no_adapt, "Freeze the parameter estimate");
  auto* seed_opt = simulate->add_option("--seed", sim_seed, "Random seed");

  CheckOptions check;
  std::string params_path;
  auto* check_cmd = app.add_subcommand("check", "Run the invariant suite");
  auto* params_opt = check_cmd->add_option("--params", params_path, "Config file whose [robot.nominal] is checked");
  check_cmd->add_option("--seed", check.seed, "Random seed");

  IdentifyOptions identify;
  double rls_cov = 0.0;
  std::string identify_config;
  auto* identify_cmd = app.add_subcommand("identify", "Replay the estimator over a simulate CSV log");
  identify_cmd->add_option("log", identify.log_path, "CSV log written by simulate")->required();
  auto* cov_opt = identify_cmd->add_option("--rls-cov", rls_cov, "Initial covariance scale")
                      ->check(CLI::PositiveNumber);
  auto* cfg_opt = identify_cmd->add_option("--config", identify_config, "Config with the nominal model and RLS settings");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try
  {
    app.parse(reversed);
  }
  catch (const CLI::CallForHelp&)
  {
    out << app.help();
    return kExitOk;
  }
  catch (const CLI::ParseError& e)
  {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  if (*simulate)
  {
    if (*mode_opt)
    {
      sim.mode = sim_mode;
    }
    if (*seed_opt)
    {
      sim.seed = sim_seed;
    }
    return cmd_simulate(sim, out, err);
  }
  if (*check_cmd)
  {
    if (*params_opt)
    {
      check.params_path = params_path;
    }
    return cmd_check(check, out, err);
  }
  if (*cov_opt)
  {
    identify.rls_cov = rls_cov;
  }
  if (*cfg_opt)
  {
    identify.config_path = identify_config;
  }
  return cmd_identify(identify, out, err);
}

} // namespace legctl
