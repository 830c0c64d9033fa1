#include "holoflow/csv.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace holoflow {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_quote(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) os << ',';
    os << csv_quote(fields[i]);
  }
  os << '\n';
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header.size()) {
    throw std::invalid_argument("csv row has " + std::to_string(row.size()) + " fields, header has " +
                                std::to_string(header.size()));
  }
  rows.push_back(std::move(row));
}

void CsvTable::write(std::ostream& os) const {
  write_csv_row(os, header);
  for (const auto& r : rows) write_csv_row(os, r);
}

}  // namespace holoflow
