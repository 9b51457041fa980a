#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hostnet {

/// Splits text into codepoint-sized chunks. Bytes that do not form a valid
/// UTF-8 sequence are passed through one byte at a time, so the result
/// always concatenates back to the input.
std::vector<std::string> utf8_chars(std::string_view text);

/// Encodes a single codepoint as UTF-8.
std::string utf8_encode(char32_t cp);

/// Codepoint of the first character of s (or the raw byte value when s is
/// not valid UTF-8).
char32_t utf8_first_codepoint(std::string_view s);

}  // namespace hostnet
