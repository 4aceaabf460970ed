#include "legctl/invariants.hpp"

#include "legctl/control.hpp"
#include "legctl/dynamics.hpp"
#include "legctl/estimator.hpp"
#include "legctl/kinematics.hpp"
#include "legctl/oracles.hpp"
#include "legctl/regressor.hpp"
#include "legctl/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

namespace legctl
{

bool SuiteReport::all_passed() const
{
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* SuiteReport::find(const std::string& name) const
{
  const auto it = std::find_if(checks.begin(), checks.end(), [&](const CheckResult& c) { return c.name == name; });
  return it == checks.end() ? nullptr : &*it;
}

namespace
{

using oracle::random_vec4;

constexpr double kPi = 3.14159265358979323846;

struct Measurement
{
  double value = 0.0;
  std::string detail{};
  bool hard_failure = false; ///< fails regardless of the bound
};

class SuiteBuilder
{
public:
  explicit SuiteBuilder(SuiteReport& report) : report_(report) {}

  void run(const std::string& module, const std::string& name, double bound, Comparison comparison,
           const std::function<Measurement()>& body)
  {
    CheckResult result;
    result.module = module;
    result.name = name;
    result.bound = bound;
    result.comparison = comparison;
    try
    {
      const Measurement m = body();
      result.measured = m.value;
      result.detail = m.detail;
      const bool within = comparison == Comparison::at_most ? m.value <= bound : m.value >= bound;
      result.passed = within && !m.hard_failure && std::isfinite(m.value);
    }
    catch (const std::exception& err)
    {
      result.measured = std::nan("");
      result.detail = std::string("error: ") + err.what();
      result.passed = false;
    }
    report_.checks.push_back(std::move(result));
  }

private:
  SuiteReport& report_;
};

double max_abs(const Eigen::MatrixXd& m)
{
  return m.cwiseAbs().maxCoeff();
}

RobotParams scaled_com(const RobotParams& params, double su, double sl)
{
  RobotParams out = params;
  out.com_upper = std::min(params.com_upper * su, params.len_upper);
  out.com_lower = std::min(params.com_lower * sl, params.len_lower);
  return out;
}

Vec5 random_vec5(std::mt19937_64& rng)
{
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vec5 v;
  for (int i = 0; i < kThetas; ++i)
  {
    v[i] = dist(rng);
  }
  return v;
}

Mat45 random_regressor(std::mt19937_64& rng)
{
  std::normal_distribution<double> n(0.0, 1.0);
  Mat45 a;
  for (int i = 0; i < a.rows(); ++i)
  {
    for (int j = 0; j < a.cols(); ++j)
    {
      a(i, j) = n(rng);
    }
  }
  return a;
}

double mean_abs_error(const std::vector<LogRecord>& log, double from)
{
  double sum = 0.0;
  int count = 0;
  for (const auto& r : log)
  {
    if (r.t >= from - 1e-12)
    {
      sum += (r.q - r.q_ref).cwiseAbs().maxCoeff();
      ++count;
    }
  }
  return count > 0 ? sum / count : 0.0;
}

void kinematics_checks(SuiteBuilder& suite, const RobotParams& params, std::mt19937_64& rng)
{
  suite.run("kincore", "rotation_orthonormal", 1e-12, Comparison::at_most, [&] {
    std::uniform_real_distribution<double> angle(-4.0 * kPi, 4.0 * kPi);
    double worst = 0.0;
    for (const Axis axis : {Axis::x, Axis::y, Axis::z})
    {
      for (int k = 0; k < 1000; ++k)
      {
        const Mat3 r = rot_axis(axis, angle(rng));
        worst = std::max({worst, max_abs(r.transpose() * r - Mat3::Identity()), std::abs(r.determinant() - 1.0)});
      }
    }
    return Measurement{worst};
  });

  suite.run("kincore", "fk_length_preservation", 1e-12, Comparison::at_most, [&] {
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k)
    {
      worst = std::max(worst, std::abs(fk_com_upper(random_vec4(rng, kPi), params).norm() - params.com_upper));
    }
    return Measurement{worst};
  });

  suite.run("kincore", "jacobian_matches_finite_difference", 1e-6, Comparison::at_most, [&] {
    double worst = 0.0;
    for (int k = 0; k < 100; ++k)
    {
      const Vec4 q = random_vec4(rng, kPi);
      for (const Body body : {Body::upper, Body::lower, Body::tip})
      {
        worst = std::max(worst, max_abs(jacobian_com(body, q, params) - oracle::fd_jacobian(body, q, params)));
      }
    }
    return Measurement{worst};
  });

  suite.run("kincore", "lower_tip_consistency", 0.0, Comparison::at_most, [&] {
    RobotParams stretched = params;
    stretched.com_lower = params.len_lower;
    double worst = 0.0;
    for (int k = 0; k < 100; ++k)
    {
      const Vec4 q = random_vec4(rng, kPi);
      worst = std::max(worst, max_abs(fk_com_lower(q, stretched) - fk_tip(q, params)));
    }
    return Measurement{worst};
  });
}

void dynamics_checks(SuiteBuilder& suite, const RobotParams& params, std::mt19937_64& rng)
{
  suite.run("dynamics", "mass_matrix_symmetry", 1e-12, Comparison::at_most, [&] {
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k)
    {
      const Mat4 m = mass_matrix(random_vec4(rng, kPi), params);
      worst = std::max(worst, max_abs(m - m.transpose()));
    }
    return Measurement{worst};
  });

  suite.run("dynamics", "mass_matrix_positive_definite", params.rotor_inertia - 1e-12, Comparison::at_least, [&] {
    Measurement out;
    out.value = std::numeric_limits<double>::infinity();
    // Upright first: every point mass is on the hip-z axis there.
    std::vector<Vec4> configs{Vec4::Zero()};
    for (int k = 0; k < 1000; ++k)
    {
      configs.push_back(random_vec4(rng, kPi));
    }
    for (const Vec4& q : configs)
    {
      const Mat4 m = mass_matrix(q, params);
      out.value = std::min(out.value, Eigen::SelfAdjointEigenSolver<Mat4>(m).eigenvalues().minCoeff());
      try
      {
        forward_dynamics(q, Vec4::Zero(), Vec4::Zero(), params);
      }
      catch (const SingularMatrixError&)
      {
        if (!out.hard_failure)
        {
          std::ostringstream msg;
          msg << "singular mass matrix at " << (q.isZero() ? "upright configuration " : "configuration ")
              << "q = [" << q.transpose() << "]";
          out.detail = msg.str();
        }
        out.hard_failure = true;
      }
    }
    return out;
  });

  suite.run("dynamics", "coriolis_skew_symmetry", 1e-9, Comparison::at_most, [&] {
    double worst = 0.0;
    for (int k = 0; k < 100; ++k)
    {
      const Vec4 q = random_vec4(rng, kPi);
      const Vec4 qd = random_vec4(rng, 2.0);
      const Mat4 n = oracle::fd_mass_matrix_rate(q, qd, params) - 2.0 * coriolis_matrix(q, qd, params);
      worst = std::max(worst, std::abs(qd.dot(n * qd)));
    }
    return Measurement{worst};
  });

  suite.run("dynamics", "euler_lagrange_equivalence", 1e-5, Comparison::at_most, [&] {
    double worst = 0.0;
    for (int k = 0; k < 100; ++k)
    {
      const Vec4 q = random_vec4(rng, kPi);
      const Vec4 qd = random_vec4(rng, 2.0);
      const Vec4 qdd = random_vec4(rng, 5.0);
      const Vec4 expected = oracle::euler_lagrange_torque(q, qd, qdd, params);
      const Vec4 actual = inverse_dynamics(q, qd, qdd, params);
      worst = std::max(worst, (actual - expected).lpNorm<Eigen::Infinity>() / expected.lpNorm<Eigen::Infinity>());
    }
    return Measurement{worst};
  });

  suite.run("dynamics", "energy_conservation", 1e-6, Comparison::at_most, [&] {
    Vec4 q;
    Vec4 qd;
    double e0 = 0.0;
    do
    {
      q = random_vec4(rng, kPi);
      qd = random_vec4(rng, 1.0);
      e0 = total_energy(q, qd, params);
    } while (std::abs(e0) < 0.5);
    double worst = 0.0;
    constexpr double dt = 1e-4;
    for (int k = 1; k <= 100000; ++k)
    {
      std::tie(q, qd) = rk4_step(q, qd, Vec4::Zero(), dt, params);
      if (k % 100 == 0)
      {
        worst = std::max(worst, std::abs(total_energy(q, qd, params) - e0));
      }
    }
    return Measurement{worst / std::abs(e0)};
  });

  suite.run("dynamics", "inverse_forward_roundtrip", 1e-9, Comparison::at_most, [&] {
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k)
    {
      const Vec4 q = random_vec4(rng, kPi);
      const Vec4 qd = random_vec4(rng, 2.0);
      const Vec4 qdd = random_vec4(rng, 5.0);
      const Vec4 back = forward_dynamics(q, qd, inverse_dynamics(q, qd, qdd, params), params);
      worst = std::max(worst, (back - qdd).lpNorm<Eigen::Infinity>());
    }
    return Measurement{worst};
  });
}

void regressor_checks(SuiteBuilder& suite, const RobotParams& params, std::mt19937_64& rng,
                      const SuiteOptions& options)
{
  suite.run("regressor", "reconstruction_identity", 1e-9, Comparison::at_most, [&] {
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k)
    {
      const Vec4 q = random_vec4(rng, kPi);
      const Vec4 qd = random_vec4(rng, 2.0);
      const Vec4 qdd = random_vec4(rng, 5.0);
      RegressorMatrix phi = regressor_scaled(q, qd, qdd, params);
      if (options.zero_regressor_column)
      {
        phi.col(*options.zero_regressor_column).setZero();
      }
      worst = std::max(worst, (phi * Vec5::Ones() - inverse_dynamics(q, qd, qdd, params)).lpNorm<Eigen::Infinity>());
    }
    return Measurement{worst};
  });

  suite.run("regressor", "com_independence", 1e-12, Comparison::at_most, [&] {
    double worst = 0.0;
    const RobotParams shifted = scaled_com(params, 0.7, 1.3);
    for (int k = 0; k < 100; ++k)
    {
      const Vec4 q = random_vec4(rng, kPi);
      const Vec4 qd = random_vec4(rng, 2.0);
      const Vec4 qdd = random_vec4(rng, 5.0);
      worst = std::max(worst, max_abs(regressor_raw(q, qd, qdd, params) - regressor_raw(q, qd, qdd, shifted)));
    }
    return Measurement{worst};
  });

  suite.run("regressor", "linearity", 1e-12, Comparison::at_most, [&] {
    std::uniform_real_distribution<double> coef(-3.0, 3.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k)
    {
      const RegressorMatrix phi =
          regressor_scaled(random_vec4(rng, kPi), random_vec4(rng, 2.0), random_vec4(rng, 5.0), params);
      const Vec5 t1 = random_vec5(rng);
      const Vec5 t2 = random_vec5(rng);
      const double a = coef(rng);
      const double b = coef(rng);
      const Vec4 lhs = phi * (a * t1 + b * t2);
      const Vec4 rhs = a * (phi * t1) + b * (phi * t2);
      const double scale = std::max(1.0, max_abs(phi) * (std::abs(a) * max_abs(t1) + std::abs(b) * max_abs(t2)));
      worst = std::max(worst, (lhs - rhs).lpNorm<Eigen::Infinity>() / scale);
    }
    return Measurement{worst};
  });

  suite.run("regressor", "cross_model_exactness", 1e-9, Comparison::at_most, [&] {
    double worst = 0.0;
    for (const double su : {0.8, 1.0, 1.2})
    {
      for (const double sl : {0.8, 1.0, 1.2})
      {
        const RobotParams actual = scaled_com(params, su, sl);
        const ThetaScales theta_star = true_theta_scales(params, actual);
        for (int k = 0; k < 100; ++k)
        {
          const Vec4 q = random_vec4(rng, kPi);
          const Vec4 qd = random_vec4(rng, 2.0);
          const Vec4 qdd = random_vec4(rng, 5.0);
          const Vec4 predicted = regressor_scaled(q, qd, qdd, params) * theta_star;
          worst = std::max(worst, (predicted - inverse_dynamics(q, qd, qdd, actual)).lpNorm<Eigen::Infinity>());
        }
      }
    }
    return Measurement{worst};
  });
}

void estimator_checks(SuiteBuilder& suite, const RobotParams& params, std::mt19937_64& rng)
{
  suite.run("estimator", "rls_batch_equivalence", 1e-8, Comparison::at_most, [&] {
    const RlsConfig config;
    const ThetaScales theta_star = true_theta_scales(params, scaled_com(params, 1.2, 0.9));
    std::normal_distribution<double> noise(0.0, 0.05);
    std::vector<RlsSample> samples;
    RlsState state = rls_init(config);
    for (int k = 0; k < 500; ++k)
    {
      const RegressorMatrix phi =
          regressor_scaled(random_vec4(rng, kPi), random_vec4(rng, 2.0), random_vec4(rng, 5.0), params);
      Vec4 tau = phi * theta_star;
      for (int j = 0; j < kJoints; ++j)
      {
        tau[j] += noise(rng);
      }
      samples.emplace_back(phi, tau);
      state = rls_update(state, phi, tau);
    }
    return Measurement{(state.theta_hat - rls_batch_oracle(samples, config)).lpNorm<Eigen::Infinity>()};
  });

  // One long random run feeds the symmetry, definiteness and monotonicity checks.
  double asymmetry = 0.0;
  double min_eig = std::numeric_limits<double>::infinity();
  double monotone_violation = 0.0;
  std::string run_error;
  try
  {
    RlsState state = rls_init(RlsConfig{});
    std::vector<Vec5> probes(5);
    for (auto& x : probes)
    {
      x = random_vec5(rng);
    }
    for (int k = 0; k < 10000; ++k)
    {
      const Mat5 before = state.cov;
      state = rls_update(state, random_regressor(rng), random_vec4(rng, 1.0));
      asymmetry = std::max(asymmetry, max_abs(state.cov - state.cov.transpose()));
      min_eig = std::min(min_eig, Eigen::SelfAdjointEigenSolver<Mat5>(state.cov).eigenvalues().minCoeff());
      for (const auto& x : probes)
      {
        const double old_q = x.dot(before * x);
        const double new_q = x.dot(state.cov * x);
        monotone_violation = std::max(monotone_violation, (new_q - old_q) / std::max(1.0, old_q));
      }
    }
  }
  catch (const std::exception& err)
  {
    run_error = err.what();
  }
  auto from_run = [&](double value) {
    return [value, &run_error] {
      if (!run_error.empty())
      {
        throw Error(run_error);
      }
      return Measurement{value};
    };
  };
  suite.run("estimator", "covariance_symmetry", 1e-9, Comparison::at_most, from_run(asymmetry));
  suite.run("estimator", "covariance_positive_definite", std::numeric_limits<double>::min(), Comparison::at_least,
            from_run(min_eig));
  suite.run("estimator", "covariance_monotone", 1e-12, Comparison::at_most, from_run(monotone_violation));

  suite.run("estimator", "noise_free_convergence", 1e-6, Comparison::at_most, [&] {
    const ThetaScales theta_star = true_theta_scales(params, scaled_com(params, 1.2, 1.2));
    RlsState state = rls_init(RlsConfig{});
    for (int k = 0; k < 500; ++k)
    {
      const Mat45 phi = random_regressor(rng);
      state = rls_update(state, phi, phi * theta_star);
    }
    return Measurement{(state.theta_hat - theta_star).lpNorm<Eigen::Infinity>()};
  });
}

void control_checks(SuiteBuilder& suite, const RobotParams& params, std::mt19937_64& rng, const SuiteOptions& options)
{
  suite.run("control", "zero_error_collapse", 1e-12, Comparison::at_most, [&] {
    double worst = 0.0;
    const Gains gains;
    for (int k = 0; k < 100; ++k)
    {
      JointState meas;
      meas.q = random_vec4(rng, kPi);
      meas.qd = random_vec4(rng, 2.0);
      const TrajectoryPoint ref{meas.q, meas.qd, random_vec4(rng, 5.0)};
      const ThetaScales theta = Vec5::Ones() + 0.3 * random_vec5(rng);
      const Vec4 a = computed_torque(meas, ref, theta, params, gains, ControlLawMode::standard);
      const Vec4 b = computed_torque(meas, ref, theta, params, gains, ControlLawMode::paper_literal);
      worst = std::max(worst, (a - b).lpNorm<Eigen::Infinity>());
    }
    return Measurement{worst};
  });

  suite.run("control", "trajectory_smoothness", 1e-5, Comparison::at_most, [&] {
    const std::vector<Trajectory> trajectories{
        Trajectory::point_to_point(random_vec4(rng, 1.0), random_vec4(rng, 1.0), 2.0),
        Trajectory::excitation(random_vec4(rng, 0.5), 4, 1.0, 10.0, rng()),
    };
    constexpr double h = 1e-6;
    double worst = 0.0;
    for (const auto& traj : trajectories)
    {
      const auto segments = static_cast<double>(traj.waypoints().size() - 1);
      const double seg = traj.duration() / segments;
      std::uniform_real_distribution<double> local(1e-3, seg - 1e-3);
      for (int k = 0; k < 200; ++k)
      {
        const double t = seg * std::floor(segments * (k / 200.0)) + local(rng);
        const TrajectoryPoint p = traj.sample(t);
        const TrajectoryPoint fwd = traj.sample(t + h);
        const TrajectoryPoint bwd = traj.sample(t - h);
        const Vec4 vel = (fwd.q_ref - bwd.q_ref) / (2.0 * h);
        const Vec4 acc = (fwd.qd_ref - bwd.qd_ref) / (2.0 * h);
        worst = std::max(worst, (vel - p.qd_ref).lpNorm<Eigen::Infinity>() /
                                    std::max(1.0, p.qd_ref.lpNorm<Eigen::Infinity>()));
        worst = std::max(worst, (acc - p.qdd_ref).lpNorm<Eigen::Infinity>() /
                                    std::max(1.0, p.qdd_ref.lpNorm<Eigen::Infinity>()));
      }
    }
    return Measurement{worst};
  });

  if (options.skip_closed_loop)
  {
    return;
  }

  suite.run("control", "zoh_exactness", 0.0, Comparison::at_most, [&] {
    ExperimentConfig config;
    config.nominal_params = params;
    config.true_params = params;
    config.duration = 0.5;
    std::vector<std::pair<double, Vec4>> applied;
    ExperimentHooks hooks;
    hooks.on_substep = [&](double t, const Vec4& tau) { applied.emplace_back(t, tau); };
    run_experiment(config, hooks);
    const int per_period = substeps_per_period(config.control_period, config.plant_substep);
    double violations = 0.0;
    for (std::size_t i = 1; i < applied.size(); ++i)
    {
      const bool boundary = i % static_cast<std::size_t>(per_period) == 0;
      if (!boundary && applied[i].second != applied[i - 1].second)
      {
        violations += 1.0;
      }
    }
    return Measurement{violations, std::to_string(applied.size()) + " substeps inspected"};
  });

  suite.run("control", "gain_monotonicity", 1.0, Comparison::at_most, [&] {
    // Regulation about a fixed target under a CoM mismatch, adaptation off:
    // the steady-state sag must not grow when Kp doubles at equal damping ratio.
    auto steady_error = [&](double kp) {
      ExperimentConfig config;
      config.nominal_params = params;
      config.true_params = scaled_com(params, 1.2, 1.2);
      config.adaptation_on = false;
      config.trajectory.q_end = config.trajectory.q_start;
      config.duration = 3.0;
      config.gains.kp = Vec4::Constant(kp);
      config.gains.kd = Vec4::Constant(2.0 * std::sqrt(kp));
      return mean_abs_error(run_experiment(config), 2.5);
    };
    const double base = steady_error(100.0);
    const double doubled = steady_error(200.0);
    std::ostringstream detail;
    detail << "steady error " << base << " -> " << doubled;
    return Measurement{base > 0.0 ? doubled / base : 0.0, detail.str()};
  });
}

void simulation_checks(SuiteBuilder& suite, const RobotParams& params, std::uint64_t seed,
                       const SuiteOptions& options)
{
  if (options.skip_closed_loop)
  {
    return;
  }

  suite.run("simrunner", "determinism", 0.0, Comparison::at_most, [&] {
    ExperimentConfig config = identification_experiment(params, 1.2, 2.0, seed);
    config.noise_std = 1e-4;
    const auto a = run_experiment(config);
    const auto b = run_experiment(config);
    double mismatches = a.size() == b.size() ? 0.0 : 1.0;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
    {
      const bool same = a[i].t == b[i].t && a[i].q == b[i].q && a[i].qd == b[i].qd && a[i].qdd == b[i].qdd &&
                        a[i].tau == b[i].tau && a[i].theta_hat == b[i].theta_hat &&
                        a[i].theta_error_sq == b[i].theta_error_sq;
      mismatches += same ? 0.0 : 1.0;
    }
    return Measurement{mismatches};
  });

  suite.run("simrunner", "substep_refinement", 1e-7, Comparison::at_most, [&] {
    ExperimentConfig config;
    config.nominal_params = params;
    config.true_params = scaled_com(params, 1.2, 1.2);
    std::pair<Vec4, Vec4> coarse;
    std::pair<Vec4, Vec4> fine;
    run_experiment(config, {nullptr, &coarse});
    config.plant_substep /= 2.0;
    run_experiment(config, {nullptr, &fine});
    return Measurement{(coarse.first - fine.first).lpNorm<Eigen::Infinity>()};
  });

  suite.run("simrunner", "noise_free_adaptive_residual", 1e-6, Comparison::at_most, [&] {
    const ExperimentConfig config = identification_experiment(params, 1.2, 10.0, seed);
    const auto log = run_experiment(config);
    const LogRecord& last = log.back();
    const LogRecord& prev = log[log.size() - 2];
    const Vec4 residual = prev.tau - regressor_scaled(last.q, last.qd, last.qdd, params) * last.theta_hat;
    return Measurement{residual.norm()};
  });
}

} // namespace

SuiteReport run_invariant_suite(const RobotParams& params, std::uint64_t seed, const SuiteOptions& options)
{
  SuiteReport report;
  SuiteBuilder suite(report);
  suite.run("kincore", "params_valid", 0.0, Comparison::at_most, [&] {
    validate(params);
    return Measurement{0.0};
  });
  if (!report.all_passed())
  {
    return report;
  }

  std::mt19937_64 rng(seed);
  kinematics_checks(suite, params, rng);
  dynamics_checks(suite, params, rng);
  regressor_checks(suite, params, rng, options);
  estimator_checks(suite, params, rng);
  control_checks(suite, params, rng, options);
  simulation_checks(suite, params, seed, options);
  return report;
}

} // namespace legctl
