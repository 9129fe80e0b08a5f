#include "taglex/unicode.hpp"

#include <cstdint>

namespace taglex::unicode {

namespace {

struct Decoded {
    char32_t cp;
    std::size_t length;  // 0 on invalid sequence
};

Decoded decode_one(std::string_view s, std::size_t i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) return {b0, 1};

    std::size_t len = 0;
    char32_t cp = 0;
    char32_t min = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
        min = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
        min = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
        min = 0x10000;
    } else {
        return {0, 0};
    }
    if (i + len > s.size()) return {0, 0};
    for (std::size_t k = 1; k < len; ++k) {
        const auto b = static_cast<unsigned char>(s[i + k]);
        if ((b & 0xC0) != 0x80) return {0, 0};
        cp = (cp << 6) | (b & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return {0, 0};
    return {cp, len};
}

char32_t map_codepoint(char32_t cp) {
    if (cp == U'\u064A') return U'\u06CC';
    if (cp == U'\u0643') return U'\u06A9';
    if (cp >= U'\u0660' && cp <= U'\u0669') return cp - 0x0660 + 0x06F0;
    return cp;
}

bool is_harakah(char32_t cp) {
    return (cp >= 0x064B && cp <= 0x065F) || cp == 0x0670;
}

}  // namespace

std::optional<std::size_t> find_invalid_utf8(std::string_view text) {
    std::size_t i = 0;
    while (i < text.size()) {
        const auto d = decode_one(text, i);
        if (d.length == 0) return i;
        i += d.length;
    }
    return std::nullopt;
}

std::u32string decode(std::string_view text) {
    std::u32string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        const auto d = decode_one(text, i);
        if (d.length == 0) {
            out.push_back(kReplacement);
            ++i;
        } else {
            out.push_back(d.cp);
            i += d.length;
        }
    }
    return out;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string encode(std::u32string_view text) {
    std::string out;
    out.reserve(text.size() * 2);
    for (char32_t cp : text) append_utf8(out, cp);
    return out;
}

bool is_space(char32_t cp) {
    switch (cp) {
        case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
        case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
        case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

std::string normalize(std::string_view surface) {
    const std::u32string in = decode(surface);

    std::u32string out;
    out.reserve(in.size());
    std::u32string word;
    auto flush_word = [&] {
        std::size_t b = 0;
        std::size_t e = word.size();
        while (b < e && word[b] == kZwnj) ++b;
        while (e > b && word[e - 1] == kZwnj) --e;
        if (b < e) {
            if (!out.empty()) out.push_back(U' ');
            out.append(word, b, e - b);
        }
        word.clear();
    };
    for (char32_t cp : in) {
        if (is_space(cp)) {
            flush_word();
        } else {
            word.push_back(map_codepoint(cp));
        }
    }
    flush_word();
    return encode(out);
}

std::string loose_key(std::string_view surface) {
    std::u32string out;
    for (char32_t cp : decode(normalize(surface))) {
        if (cp == kZwnj || cp == U' ' || cp == U'\u0640' || is_harakah(cp)) continue;
        out.push_back(cp);
    }
    return encode(out);
}

}  // namespace taglex::unicode
