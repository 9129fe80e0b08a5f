#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace taglex::unicode {

inline constexpr char32_t kZwnj = U'\u200C';
inline constexpr char32_t kReplacement = U'\uFFFD';

/// Byte offset of the first invalid UTF-8 sequence, or nullopt if `text` is
/// well formed (overlongs, surrogates and values above U+10FFFF are invalid).
std::optional<std::size_t> find_invalid_utf8(std::string_view text);

/// Decodes UTF-8; invalid sequences decode to U+FFFD.
std::u32string decode(std::string_view text);
std::string encode(std::u32string_view text);
void append_utf8(std::string& out, char32_t cp);

bool is_space(char32_t cp);

/// Perso-Arabic script normalization used for every dedup and grouping key:
///   U+064A ARABIC YEH -> U+06CC, U+0643 ARABIC KAF -> U+06A9,
///   U+0660..U+0669 -> U+06F0..U+06F9,
///   whitespace trimmed and collapsed to one U+0020,
///   ZWNJ kept only between two non-space characters.
/// Idempotent and total.
std::string normalize(std::string_view surface);

/// Looser comparison key used to spot repeated source forms that survive
/// dedup: normalize(), then drop ZWNJ, tatweel, spaces and Arabic harakat.
std::string loose_key(std::string_view surface);

}  // namespace taglex::unicode
