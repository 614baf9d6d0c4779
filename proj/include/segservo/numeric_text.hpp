#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace segservo {

// Shortest decimal text that parses back to the identical double.
std::string format_double(double value);

// Strict parse of a full token; throws Error(ParseError) on trailing junk.
double parse_double(std::string_view text);
long long parse_int(std::string_view text);

std::vector<std::string> split(std::string_view line, char delimiter);
std::vector<std::string> split_whitespace(std::string_view line);
std::string_view trim(std::string_view text);

}  // namespace segservo
