#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace gilbert {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);
double parse_double(std::string_view text);
long long parse_integer(std::string_view text);

/// Splits one CSV line on commas (no quoting; none of our fields need it).
std::vector<std::string_view> split_csv(std::string_view line);

}  // namespace gilbert
