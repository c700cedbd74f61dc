#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace notestd::text {

// True iff the byte sequence is structurally valid UTF-8.
bool is_valid_utf8(std::string_view bytes);

// Number of Unicode scalar values in a valid UTF-8 string.
std::size_t count_scalars(std::string_view utf8);

std::string to_lower(std::string_view s);

bool is_word_char(char c);

// Maximal runs of [A-Za-z0-9], lowercased. Punctuation and whitespace split tokens.
std::vector<std::string> tokenize_alnum_lower(std::string_view s);

// Raw word tokens (original case), split on non-alphanumeric characters.
std::vector<std::string> tokenize_alnum(std::string_view s);

// True when s[pos, pos+len) sits on word boundaries: the characters just
// outside the span are not alphanumeric.
bool on_word_boundary(std::string_view s, std::size_t pos, std::size_t len);

// Up to `radius` tokens on each side of s[begin, end), returned as one span of text.
std::string token_window(std::string_view s, std::size_t begin, std::size_t end, std::size_t radius);

std::string trim(std::string_view s);

std::vector<std::string> split_lines(std::string_view s);

bool is_all_caps(std::string_view token);

// Levenshtein distance with an early-exit bound; returns bound+1 when exceeded.
std::size_t edit_distance_bounded(std::string_view a, std::string_view b, std::size_t bound);

} // namespace notestd::text
