#pragma once

#include <string>
#include <string_view>
#include <vector>

// Minimal UTF-8 helpers. Invalid bytes decode to U+FFFD so that no input
// can make the preprocessing steps throw.
namespace trendscope::text {

std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view cps);
void append_utf8(std::string& out, char32_t cp);

bool is_space(char32_t cp);
bool is_digit(char32_t cp);
bool is_latin_letter(char32_t cp);
bool is_upper_latin(char32_t cp);
// Punctuation marks and symbols (ASCII, Latin-1, general punctuation,
// Arabic punctuation, arrows/dingbats, emoji, variation selectors).
bool is_punct_or_symbol(char32_t cp);
// Terminal punctuation used for sentence counting: . ! ? ؟ ؛
bool is_sentence_terminal(char32_t cp);

char32_t to_lower(char32_t cp);
std::string to_lower(std::string_view utf8);
// Case folding used for dictionary keys and lookups.
inline std::string casefold(std::string_view utf8) { return to_lower(utf8); }

std::vector<std::string> split_whitespace(std::string_view utf8);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::size_t count_words(std::string_view utf8);

}  // namespace trendscope::text
