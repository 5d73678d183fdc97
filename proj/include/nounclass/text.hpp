#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace nounclass::text {

/// Lowercases ASCII and the Latin-1 supplement letters (À-Þ) of a UTF-8
/// string. Everything else is copied through unchanged.
std::string to_lower(std::string_view s);

/// Number of UTF-8 code points (continuation bytes are not counted).
std::size_t utf8_length(std::string_view s);

std::vector<std::string_view> split(std::string_view s, char sep);
std::string_view trim(std::string_view s);

bool starts_with(std::string_view s, std::string_view prefix);
bool ends_with(std::string_view s, std::string_view suffix);

/// Fixed-point decimal, correctly rounded (ties to even on the exact value).
std::string fixed(double v, int decimals);

/// Shortest of `%.9g` that parses back to `v`, falling back to `%.17g`.
std::string sig9(double v);

/// Strict number parsing: the whole field must be consumed.
double parse_double(std::string_view s, std::size_t line);
long long parse_int(std::string_view s, std::size_t line);

}  // namespace nounclass::text
