#include "legctl/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace legctl
{

ConfigError::ConfigError(std::string key_, int line_, const std::string& message)
    : Error(line_ > 0 ? "config line " + std::to_string(line_) + ", key '" + key_ + "': " + message
                      : "config key '" + key_ + "': " + message),
      key(std::move(key_)), line(line_)
{
}

namespace
{

struct Entry
{
  std::string value;
  int line = 0;
};

using Section = std::map<std::string, Entry>;

const std::map<std::string, std::set<std::string>>& schema()
{
  static const std::set<std::string> robot_keys{"len_upper",  "len_lower",  "com_upper", "com_lower",
                                                "mass_upper", "mass_lower", "gravity",   "rotor_inertia"};
  static const std::map<std::string, std::set<std::string>> sections{
      {"robot.nominal", robot_keys},
      {"robot.true", robot_keys},
      {"gains", {"kp", "kd"}},
      {"trajectory", {"kind", "interpolation", "q_start", "q_end", "duration", "waypoints", "amplitude"}},
      {"rls", {"adaptation", "initial_theta", "initial_cov_scale", "forgetting"}},
      {"sim",
       {"mode", "hold_compensation", "control_period", "plant_substep", "accel_source", "noise_std", "seed"}},
  };
  return sections;
}

std::string trim(std::string_view s)
{
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos)
  {
    return {};
  }
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

std::map<std::string, Section> tokenize(std::string_view text)
{
  std::map<std::string, Section> sections;
  std::string current;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw))
  {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty())
    {
      continue;
    }
    if (line.front() == '[')
    {
      if (line.back() != ']')
      {
        throw ConfigError(line, line_no, "malformed section header");
      }
      current = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!schema().contains(current))
      {
        throw ConfigError(current, line_no, "unknown section");
      }
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
    {
      throw ConfigError(line, line_no, "expected 'key = value'");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (current.empty())
    {
      throw ConfigError(key, line_no, "key outside of any section");
    }
    if (!schema().at(current).contains(key))
    {
      throw ConfigError(key, line_no, "unknown key in section [" + current + "]");
    }
    if (value.empty())
    {
      throw ConfigError(key, line_no, "missing value");
    }
    if (!sections[current].emplace(key, Entry{value, line_no}).second)
    {
      throw ConfigError(key, line_no, "duplicate key");
    }
  }
  return sections;
}

double to_number(const std::string& text, const std::string& key, int line)
{
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+')
  {
    ++first;
  }
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value))
  {
    throw ConfigError(key, line, "expected a finite number, got '" + text + "'");
  }
  return value;
}

std::vector<double> to_list(const Entry& entry, const std::string& key)
{
  const std::string& v = entry.value;
  if (v.front() != '[')
  {
    return {to_number(v, key, entry.line)};
  }
  if (v.back() != ']')
  {
    throw ConfigError(key, entry.line, "unterminated list");
  }
  std::vector<double> out;
  std::istringstream items(v.substr(1, v.size() - 2));
  std::string item;
  while (std::getline(items, item, ','))
  {
    out.push_back(to_number(trim(item), key, entry.line));
  }
  return out;
}

// Fills a fixed-size vector from a scalar (broadcast) or a list of exactly N.
template <int N>
Eigen::Matrix<double, N, 1> to_vector(const Entry& entry, const std::string& key, bool allow_scalar)
{
  const std::vector<double> values = to_list(entry, key);
  Eigen::Matrix<double, N, 1> out;
  if (values.size() == 1 && allow_scalar && entry.value.front() != '[')
  {
    out.setConstant(values.front());
    return out;
  }
  if (static_cast<int>(values.size()) != N)
  {
    throw ConfigError(key, entry.line, "expected a list of " + std::to_string(N) + " numbers");
  }
  for (int i = 0; i < N; ++i)
  {
    out[i] = values[static_cast<std::size_t>(i)];
  }
  return out;
}

class SectionReader
{
public:
  SectionReader(const std::map<std::string, Section>& all, const std::string& name)
  {
    if (const auto it = all.find(name); it != all.end())
    {
      section_ = &it->second;
    }
  }

  const Entry* find(const std::string& key) const
  {
    if (section_ == nullptr)
    {
      return nullptr;
    }
    const auto it = section_->find(key);
    return it == section_->end() ? nullptr : &it->second;
  }

  int line(const std::string& key) const
  {
    const Entry* e = find(key);
    return e == nullptr ? 0 : e->line;
  }

  // Reads a number and checks it with `ok`, reporting `rule` on failure.
  void number(const std::string& key, double& out, const std::function<bool(double)>& ok, const char* rule) const
  {
    if (const Entry* e = find(key))
    {
      const double v = to_number(e->value, key, e->line);
      if (!ok(v))
      {
        throw ConfigError(key, e->line, std::string("out of range: ") + rule);
      }
      out = v;
    }
  }

  template <typename Enum>
  void choice(const std::string& key, Enum& out, std::optional<Enum> (*parse)(std::string_view),
              const char* allowed) const
  {
    if (const Entry* e = find(key))
    {
      const auto parsed = parse(e->value);
      if (!parsed)
      {
        throw ConfigError(key, e->line, "expected one of " + std::string(allowed) + ", got '" + e->value + "'");
      }
      out = *parsed;
    }
  }

  void boolean(const std::string& key, bool& out) const
  {
    if (const Entry* e = find(key))
    {
      if (e->value == "true")
      {
        out = true;
      }
      else if (e->value == "false")
      {
        out = false;
      }
      else
      {
        throw ConfigError(key, e->line, "expected true or false");
      }
    }
  }

private:
  const Section* section_ = nullptr;
};

const auto positive = [](double v) { return v > 0.0; };
const auto non_negative = [](double v) { return v >= 0.0; };

void read_robot(const SectionReader& s, RobotParams& p)
{
  s.number("len_upper", p.len_upper, positive, "must be > 0");
  s.number("len_lower", p.len_lower, positive, "must be > 0");
  s.number("com_upper", p.com_upper, positive, "must be > 0");
  s.number("com_lower", p.com_lower, positive, "must be > 0");
  s.number("mass_upper", p.mass_upper, positive, "must be > 0");
  s.number("mass_lower", p.mass_lower, positive, "must be > 0");
  s.number("gravity", p.gravity, non_negative, "must be >= 0");
  s.number("rotor_inertia", p.rotor_inertia, non_negative, "must be >= 0");

  if (p.com_upper > p.len_upper)
  {
    throw ConfigError("com_upper", s.line("com_upper"), "must not exceed len_upper");
  }
  if (p.com_lower > p.len_lower)
  {
    throw ConfigError("com_lower", s.line("com_lower"), "must not exceed len_lower");
  }
}

void read_gains(const SectionReader& s, Gains& g)
{
  for (const auto& [key, target] : {std::pair{"kp", &g.kp}, std::pair{"kd", &g.kd}})
  {
    if (const Entry* e = s.find(key))
    {
      const Vec4 v = to_vector<4>(*e, key, true);
      if ((v.array() < 0.0).any())
      {
        throw ConfigError(key, e->line, "out of range: gains must be >= 0");
      }
      *target = v;
    }
  }
}

void read_trajectory(const SectionReader& s, ExperimentConfig& c)
{
  s.choice("kind", c.trajectory.kind, &parse_trajectory_kind, "point_to_point, excitation");
  s.choice("interpolation", c.trajectory.interpolation,
           +[](std::string_view t) -> std::optional<Interpolation> {
             if (t == "quintic")
             {
               return Interpolation::quintic;
             }
             if (t == "linear")
             {
               return Interpolation::linear;
             }
             return std::nullopt;
           },
           "quintic, linear");
  if (const Entry* e = s.find("q_start"))
  {
    c.trajectory.q_start = to_vector<4>(*e, "q_start", false);
  }
  if (const Entry* e = s.find("q_end"))
  {
    c.trajectory.q_end = to_vector<4>(*e, "q_end", false);
  }
  s.number("duration", c.duration, positive, "must be > 0");
  double waypoints = c.trajectory.waypoints;
  s.number("waypoints", waypoints, [](double v) { return v >= 1.0 && v == std::floor(v) && v <= 1000.0; },
           "must be an integer in [1, 1000]");
  c.trajectory.waypoints = static_cast<int>(waypoints);
  s.number("amplitude", c.trajectory.amplitude, non_negative, "must be >= 0");
}

void read_rls(const SectionReader& s, ExperimentConfig& c)
{
  s.boolean("adaptation", c.adaptation_on);
  if (const Entry* e = s.find("initial_theta"))
  {
    c.rls.initial_theta = to_vector<kThetas>(*e, "initial_theta", true);
  }
  s.number("initial_cov_scale", c.rls.initial_cov_scale, positive, "must be > 0");
  s.number("forgetting", c.rls.forgetting, [](double v) { return v > 0.0 && v <= 1.0; }, "must lie in (0, 1]");
}

void read_sim(const SectionReader& s, ExperimentConfig& c)
{
  s.choice("mode", c.mode, &parse_control_law_mode, "standard, paper_literal");
  s.choice("hold_compensation", c.hold, &parse_hold_compensation, "none, midpoint");
  s.number("control_period", c.control_period, positive, "must be > 0");
  s.number("plant_substep", c.plant_substep, positive, "must be > 0");
  s.choice("accel_source", c.accel_source, &parse_accel_source, "plant_exact, finite_difference");
  s.number("noise_std", c.noise_std, non_negative, "must be >= 0");
  double seed = static_cast<double>(c.seed);
  s.number("seed", seed, [](double v) { return v >= 0.0 && v == std::floor(v) && v <= 9007199254740992.0; },
           "must be a non-negative integer");
  c.seed = static_cast<std::uint64_t>(seed);

  try
  {
    substeps_per_period(c.control_period, c.plant_substep);
  }
  catch (const InvalidArgument& err)
  {
    throw ConfigError("plant_substep", s.line("plant_substep"), err.what());
  }
}

std::string num(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename Derived>
std::string list(const Eigen::MatrixBase<Derived>& v)
{
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i)
  {
    out += (i ? ", " : "") + num(v[i]);
  }
  return out + "]";
}

} // namespace

ExperimentConfig parse_config(std::string_view text)
{
  const auto sections = tokenize(text);
  ExperimentConfig c;

  const SectionReader nominal(sections, "robot.nominal");
  read_robot(nominal, c.nominal_params);

  // The plant starts from the nominal model; only CoM distances may differ.
  c.true_params = c.nominal_params;
  const SectionReader plant(sections, "robot.true");
  read_robot(plant, c.true_params);
  const RobotParams& n = c.nominal_params;
  const RobotParams& t = c.true_params;
  for (const auto& [key, differs] : {std::pair{"len_upper", n.len_upper != t.len_upper},
                                     std::pair{"len_lower", n.len_lower != t.len_lower},
                                     std::pair{"mass_upper", n.mass_upper != t.mass_upper},
                                     std::pair{"mass_lower", n.mass_lower != t.mass_lower},
                                     std::pair{"gravity", n.gravity != t.gravity},
                                     std::pair{"rotor_inertia", n.rotor_inertia != t.rotor_inertia}})
  {
    if (differs)
    {
      throw ConfigError(key, plant.line(key), "the plant may differ from the nominal model only in com_upper/com_lower");
    }
  }

  read_gains(SectionReader(sections, "gains"), c.gains);
  read_trajectory(SectionReader(sections, "trajectory"), c);
  read_rls(SectionReader(sections, "rls"), c);
  read_sim(SectionReader(sections, "sim"), c);

  try
  {
    validate(c);
  }
  catch (const InvalidArgument& err)
  {
    throw ConfigError("*", 0, err.what());
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw Error("cannot open config file " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string format_config(const ExperimentConfig& c)
{
  std::ostringstream out;
  auto robot = [&](const char* name, const RobotParams& p) {
    out << "[" << name << "]\n"
        << "len_upper = " << num(p.len_upper) << "\n"
        << "len_lower = " << num(p.len_lower) << "\n"
        << "com_upper = " << num(p.com_upper) << "\n"
        << "com_lower = " << num(p.com_lower) << "\n"
        << "mass_upper = " << num(p.mass_upper) << "\n"
        << "mass_lower = " << num(p.mass_lower) << "\n"
        << "gravity = " << num(p.gravity) << "\n"
        << "rotor_inertia = " << num(p.rotor_inertia) << "\n\n";
  };
  robot("robot.nominal", c.nominal_params);
  robot("robot.true", c.true_params);
  out << "[gains]\n"
      << "kp = " << list(c.gains.kp) << "\n"
      << "kd = " << list(c.gains.kd) << "\n\n"
      << "[trajectory]\n"
      << "kind = " << to_string(c.trajectory.kind) << "\n"
      << "interpolation = " << (c.trajectory.interpolation == Interpolation::quintic ? "quintic" : "linear") << "\n"
      << "q_start = " << list(c.trajectory.q_start) << "\n"
      << "q_end = " << list(c.trajectory.q_end) << "\n"
      << "duration = " << num(c.duration) << "\n"
      << "waypoints = " << c.trajectory.waypoints << "\n"
      << "amplitude = " << num(c.trajectory.amplitude) << "\n\n"
      << "[rls]\n"
      << "adaptation = " << (c.adaptation_on ? "true" : "false") << "\n"
      << "initial_theta = " << list(c.rls.initial_theta) << "\n"
      << "initial_cov_scale = " << num(c.rls.initial_cov_scale) << "\n"
      << "forgetting = " << num(c.rls.forgetting) << "\n\n"
      << "[sim]\n"
      << "mode = " << to_string(c.mode) << "\n"
      << "hold_compensation = " << to_string(c.hold) << "\n"
      << "control_period = " << num(c.control_period) << "\n"
      << "plant_substep = " << num(c.plant_substep) << "\n"
      << "accel_source = " << to_string(c.accel_source) << "\n"
      << "noise_std = " << num(c.noise_std) << "\n"
      << "seed = " << c.seed << "\n";
  return out.str();
}

} // namespace legctl
