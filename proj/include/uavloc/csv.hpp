#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace uavloc::csv {

/// RFC-4180 quoting: fields containing comma, quote, or newline are
/// quoted, embedded quotes doubled.
std::string escape(const std::string& field);

void write_row(std::ostream& os, const std::vector<std::string>& fields);

/// Parses one CSV record (may span lines when fields contain newlines).
/// Returns false at end of stream.
bool read_row(std::istream& is, std::vector<std::string>& fields);

}  // namespace uavloc::csv
