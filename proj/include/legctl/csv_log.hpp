#pragma once

#include "legctl/simulation.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace legctl
{

/// Raised when a log does not follow the simulate CSV schema.
struct SchemaError : Error
{
  using Error::Error;
};

/// t, q0..q3, qd0..qd3, qdd0..qdd3, qref0..qref3, tau0..tau3, th0..th4,
/// theta_err_sq, frozen
const std::vector<std::string>& csv_columns();

/// One header row, then one row per record. Numbers carry 17 significant
/// digits so a reader recovers every double exactly. qd_ref and qdd_ref are
/// not part of the schema.
void write_csv(std::ostream& out, const std::vector<LogRecord>& log);

/// Inverse of write_csv. Columns are located by header name; a missing or
/// unknown column throws SchemaError naming it. qd_ref and qdd_ref come back
/// as zero.
std::vector<LogRecord> read_csv(std::istream& in);

} // namespace legctl
