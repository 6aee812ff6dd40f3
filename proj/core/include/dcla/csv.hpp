#pragma once

#include <string>
#include <vector>

namespace dcla::csv {

/// One parsed row; empty trailing fields are preserved.
using Row = std::vector<std::string>;

/// Parses a single CSV line. Supports double-quoted fields with embedded
/// commas and doubled quotes; no embedded newlines.
Row parse_line(const std::string& line);

/// Reads all rows of a CSV file, skipping blank lines. Throws MissingFile.
std::vector<Row> read_file(const std::string& path);

/// Quotes a field if it contains a comma, quote, or newline.
std::string escape(const std::string& field);

std::string join(const Row& row);

} // namespace dcla::csv
