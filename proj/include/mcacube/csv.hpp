#pragma once

// Minimal RFC 4180 reader/writer: comma separator, double-quote quoting,
// quoted fields may contain commas, quotes ("") and line breaks.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mcacube::csv {

  using Row = std::vector<std::string>;

  // Next record, or nullopt at end of input. A trailing '\r' is stripped.
  std::optional<Row> read_row(std::istream& in);

  std::string quote(std::string_view field);

  void write_row(std::ostream& out, Row const& row);

} // namespace mcacube::csv
