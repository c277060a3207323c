#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace agestack::core::csv {

// Minimal RFC-4180 support: comma separator, LF or CRLF line endings,
// double-quoted fields with "" escapes.

struct Row {
  std::size_t line = 0;  // 1-based physical line where the row starts
  std::vector<std::string> fields;
};

// Reads all rows. Lines starting with '#' before the header are skipped.
// Throws SchemaError on an unterminated quoted field.
std::vector<Row> read_rows(std::istream& in);

// Quotes only when the field contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

// Shortest fixed-point rendering with at most six fractional digits
// ("17.2", "3", "0.000001").
std::string format_decimal(double value);

}  // namespace agestack::core::csv
