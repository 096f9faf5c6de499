#pragma once

#include <string>
#include <string_view>

namespace dictag::unicode {

/// Strict UTF-8 decoding: rejects overlong forms, surrogates and values
/// above U+10FFFF. Throws Error(EncodingError).
std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view text);
void append(std::string& out, char32_t cp);

bool is_valid(std::string_view utf8) noexcept;

// Simple (1:1) case mapping, so the code point count never changes.
char32_t to_lower(char32_t cp) noexcept;
char32_t to_upper(char32_t cp) noexcept;
bool is_upper(char32_t cp) noexcept;
bool is_lower(char32_t cp) noexcept;

bool is_space(char32_t cp) noexcept;
bool is_punct(char32_t cp) noexcept;
bool is_digit(char32_t cp) noexcept;
bool is_alpha(char32_t cp) noexcept;

std::u32string lowercase(std::u32string_view text);
std::string lowercase(std::string_view utf8);

std::size_t length(std::string_view utf8);

}  // namespace dictag::unicode
