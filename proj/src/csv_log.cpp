#include "legctl/csv_log.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace legctl
{

namespace
{

void append_indexed(std::vector<std::string>& cols, const std::string& prefix, int count)
{
  for (int i = 0; i < count; ++i)
  {
    cols.push_back(prefix + std::to_string(i));
  }
}

std::vector<std::string> split(const std::string& line)
{
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ','))
  {
    if (!field.empty() && field.back() == '\r')
    {
      field.pop_back();
    }
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',')
  {
    fields.emplace_back();
  }
  return fields;
}

double parse_double(const std::string& text, const std::string& column, std::size_t row)
{
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
  {
    throw SchemaError("row " + std::to_string(row) + ", column " + column + ": not a number: '" + text + "'");
  }
  return v;
}

} // namespace

const std::vector<std::string>& csv_columns()
{
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c{"t"};
    append_indexed(c, "q", 4);
    append_indexed(c, "qd", 4);
    append_indexed(c, "qdd", 4);
    append_indexed(c, "qref", 4);
    append_indexed(c, "tau", 4);
    append_indexed(c, "th", 5);
    c.emplace_back("theta_err_sq");
    c.emplace_back("frozen");
    return c;
  }();
  return cols;
}

void write_csv(std::ostream& out, const std::vector<LogRecord>& log)
{
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i)
  {
    out << (i ? "," : "") << cols[i];
  }
  out << '\n';

  char buf[40];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf << ',';
  };
  for (const auto& r : log)
  {
    put(r.t);
    for (const Vec4* v : {&r.q, &r.qd, &r.qdd, &r.q_ref, &r.tau})
    {
      for (int j = 0; j < kJoints; ++j)
      {
        put((*v)[j]);
      }
    }
    for (int j = 0; j < kThetas; ++j)
    {
      put(r.theta_hat[j]);
    }
    put(r.theta_error_sq);
    out << (r.estimator_frozen ? 1 : 0) << '\n';
  }
}

std::vector<LogRecord> read_csv(std::istream& in)
{
  std::string line;
  if (!std::getline(in, line))
  {
    throw SchemaError("empty log: missing header row");
  }
  const auto header = split(line);
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header.size(); ++i)
  {
    if (!index.emplace(header[i], i).second)
    {
      throw SchemaError("duplicate column: " + header[i]);
    }
  }
  for (const auto& col : csv_columns())
  {
    if (!index.contains(col))
    {
      throw SchemaError("missing column: " + col);
    }
  }
  if (header.size() != csv_columns().size())
  {
    for (const auto& name : header)
    {
      if (std::find(csv_columns().begin(), csv_columns().end(), name) == csv_columns().end())
      {
        throw SchemaError("unknown column: " + name);
      }
    }
  }

  std::vector<LogRecord> log;
  std::size_t row = 1;
  while (std::getline(in, line))
  {
    ++row;
    if (line.empty() || line == "\r")
    {
      continue;
    }
    const auto fields = split(line);
    if (fields.size() != header.size())
    {
      throw SchemaError("row " + std::to_string(row) + ": expected " + std::to_string(header.size()) +
                        " fields, got " + std::to_string(fields.size()));
    }
    auto get = [&](const std::string& col) { return parse_double(fields[index.at(col)], col, row); };

    LogRecord r;
    r.t = get("t");
    for (int j = 0; j < kJoints; ++j)
    {
      const auto s = std::to_string(j);
      r.q[j] = get("q" + s);
      r.qd[j] = get("qd" + s);
      r.qdd[j] = get("qdd" + s);
      r.q_ref[j] = get("qref" + s);
      r.tau[j] = get("tau" + s);
    }
    for (int j = 0; j < kThetas; ++j)
    {
      r.theta_hat[j] = get("th" + std::to_string(j));
    }
    r.theta_error_sq = get("theta_err_sq");
    const std::string& frozen = fields[index.at("frozen")];
    if (frozen != "0" && frozen != "1")
    {
      throw SchemaError("row " + std::to_string(row) + ", column frozen: expected 0 or 1");
    }
    r.estimator_frozen = frozen == "1";
    log.push_back(r);
  }
  return log;
}

} // namespace legctl
