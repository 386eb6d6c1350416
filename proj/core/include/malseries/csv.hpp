#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace malseries {

/// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double x);

/// Splits one CSV line on commas. No quoting: the formats written by this
/// project never contain embedded commas.
std::vector<std::string> split_csv_line(std::string_view line);

/// Reads a whole CSV file into rows of fields. Skips empty trailing lines.
std::vector<std::vector<std::string>> read_csv(const std::string& path);

}  // namespace malseries
