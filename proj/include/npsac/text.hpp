#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace npsac {

bool is_valid_utf8(std::string_view bytes) noexcept;

/// Decodes UTF-8 into code points; throws ParseError on invalid input.
std::u32string decode_utf8(std::string_view bytes);

/// Decoded code points with ASCII letters lowercased.
std::u32string fold_case(std::string_view bytes);

/// Number of code points (bytes that are not continuation bytes).
std::size_t utf8_length(std::string_view bytes) noexcept;

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// Strict full-string parse; throws ParseError.
double parse_double(std::string_view text);
long long parse_int(std::string_view text);

std::vector<std::string_view> split(std::string_view text, char sep);
std::string_view trim(std::string_view text) noexcept;

}  // namespace npsac
