#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace holoflow {

/// %.17g, so values round-trip and output bytes are stable across runs.
std::string format_double(double v);

/// RFC 4180 field quoting: fields containing a comma, quote or line break are
/// wrapped in quotes with embedded quotes doubled.
std::string csv_quote(std::string_view field);

void write_csv_row(std::ostream& os, const std::vector<std::string>& fields);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Throws std::invalid_argument if the row width differs from the header.
  void add_row(std::vector<std::string> row);
  void write(std::ostream& os) const;
};

}  // namespace holoflow
