#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace nasinit {

/// Shortest decimal text that parses back to the same double; "inf"/"-inf"/"nan"
/// for non-finite values.
std::string format_double(double x);

/// Throws ParameterError on anything that is not a complete number.
double parse_double(std::string_view text);

/// Splits one CSV line on commas. No quoting: none of our files need it.
std::vector<std::string> split_csv_line(std::string_view line);

std::string join_csv(const std::vector<std::string>& fields);

} // namespace nasinit
