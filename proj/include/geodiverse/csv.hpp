// Copyright the geodiverse authors. Licensed under the terms of the Apache 2.0 license.
// See LICENSE in the project root.
#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace geodiverse::csv {

/// One parsed row plus its 1-based line number in the source file.
struct Row {
    std::vector<std::string> fields;
    std::size_t line = 0;
};

/// Parses a single CSV line. Double-quoted fields may contain commas and
/// doubled quotes; embedded newlines are not supported.
std::vector<std::string> parse_line(const std::string& line);

/// Reads a headered CSV file. Throws ValidationError if the file is missing
/// or the header does not match `expected_header` exactly.
std::vector<Row> read_file(const std::string& path,
                           const std::vector<std::string>& expected_header);

/// Quotes a field if it contains a comma, quote, or leading/trailing space.
std::string escape(const std::string& field);

/// Shortest decimal form that round-trips to the same double.
/// inf / -inf / nan spell exactly that.
std::string format_double(double v);

/// Strict double parse of a whole field ('.' decimal separator, accepts
/// inf/nan spellings produced by format_double). Throws ValidationError.
double parse_double(const std::string& field);

/// Strict non-negative integer parse. Throws ValidationError.
long long parse_int(const std::string& field);

void write_row(std::ostream& os, const std::vector<std::string>& fields);

} // namespace geodiverse::csv
