#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qrmab {

/// Shortest decimal string that parses back to exactly `value`.
std::string format_number(double value);

std::string_view trim(std::string_view text);
std::vector<std::string> split(std::string_view text, char separator);

/// Strict parse of a whole string; throws std::invalid_argument on trailing junk.
double parse_double(std::string_view text);
std::uint64_t parse_uint(std::string_view text);
bool parse_bool(std::string_view text);

}  // namespace qrmab
