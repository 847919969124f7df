#include "service_rag/text.hpp"

#include <cstdint>

namespace service_rag {

namespace {

constexpr char32_t kInvalid = 0xFFFFFFFF;

struct Decoded {
    char32_t cp;
    std::size_t len;
};

// Decodes one UTF-8 sequence at `pos`. Malformed input yields kInvalid with
// length 1 so the caller can step over the byte.
Decoded decode_utf8(std::string_view s, std::size_t pos) {
    const auto b0 = static_cast<unsigned char>(s[pos]);
    if (b0 < 0x80) return {b0, 1};

    std::size_t len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        return {kInvalid, 1};
    }
    if (pos + len > s.size()) return {kInvalid, 1};
    for (std::size_t i = 1; i < len; ++i) {
        const auto b = static_cast<unsigned char>(s[pos + i]);
        if ((b & 0xC0) != 0x80) return {kInvalid, 1};
        cp = (cp << 6) | (b & 0x3F);
    }
    // Overlong encodings and surrogates are treated as invalid bytes.
    static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return {kInvalid, 1};
    return {cp, len};
}

enum class CharClass { space, punct, word };

CharClass classify(char32_t cp) {
    if (cp == kInvalid) return CharClass::word;
    if (is_unicode_whitespace(cp)) return CharClass::space;
    if (is_punctuation(cp)) return CharClass::punct;
    return CharClass::word;
}

}  // namespace

bool is_unicode_whitespace(char32_t cp) noexcept {
    switch (cp) {
        case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
        case 0x85: case 0xA0: case 0x1680:
        case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

bool is_punctuation(char32_t cp) noexcept {
    if (cp < 0x80) {
        return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
               (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
    }
    switch (cp) {
        case 0xA1: case 0xA7: case 0xAB: case 0xB6: case 0xB7: case 0xBB: case 0xBF:
        case 0x3001: case 0x3002: case 0x3003:
            return true;
        default:
            // General Punctuation block minus its whitespace and format characters.
            return (cp >= 0x2010 && cp <= 0x2027) || (cp >= 0x2030 && cp <= 0x205E);
    }
}

Tokenization tokenize(std::string_view text) {
    Tokenization out;
    std::string pending_sep;
    std::size_t pos = 0;
    std::size_t word_start = std::string_view::npos;

    auto flush_word = [&](std::size_t end) {
        if (word_start == std::string_view::npos) return;
        out.separators.push_back(std::move(pending_sep));
        pending_sep.clear();
        out.tokens.push_back({std::string(text.substr(word_start, end - word_start)), word_start});
        word_start = std::string_view::npos;
    };

    while (pos < text.size()) {
        const auto [cp, len] = decode_utf8(text, pos);
        switch (classify(cp)) {
            case CharClass::space:
                flush_word(pos);
                pending_sep.append(text.substr(pos, len));
                break;
            case CharClass::punct:
                flush_word(pos);
                out.separators.push_back(std::move(pending_sep));
                pending_sep.clear();
                out.tokens.push_back({std::string(text.substr(pos, len)), pos});
                break;
            case CharClass::word:
                if (word_start == std::string_view::npos) word_start = pos;
                break;
        }
        pos += len;
    }
    flush_word(pos);
    out.separators.push_back(std::move(pending_sep));
    return out;
}

std::vector<std::string> tokenize_words(std::string_view text) {
    auto t = tokenize(text);
    std::vector<std::string> words;
    words.reserve(t.tokens.size());
    for (auto& tok : t.tokens) words.push_back(std::move(tok.text));
    return words;
}

std::string detokenize(const Tokenization& t) {
    std::string out;
    for (std::size_t i = 0; i < t.tokens.size(); ++i) {
        out += t.separators[i];
        out += t.tokens[i].text;
    }
    if (!t.separators.empty()) out += t.separators.back();
    return out;
}

std::vector<std::string_view> split_whitespace(std::string_view text) {
    std::vector<std::string_view> words;
    std::size_t pos = 0;
    std::size_t start = std::string_view::npos;
    while (pos < text.size()) {
        const auto [cp, len] = decode_utf8(text, pos);
        const bool space = cp != kInvalid && is_unicode_whitespace(cp);
        if (space && start != std::string_view::npos) {
            words.push_back(text.substr(start, pos - start));
            start = std::string_view::npos;
        } else if (!space && start == std::string_view::npos) {
            start = pos;
        }
        pos += len;
    }
    if (start != std::string_view::npos) words.push_back(text.substr(start));
    return words;
}

std::size_t word_count(std::string_view text) { return split_whitespace(text).size(); }

std::string_view trim(std::string_view text) {
    const auto words = split_whitespace(text);
    if (words.empty()) return {};
    const auto begin = static_cast<std::size_t>(words.front().data() - text.data());
    const auto end = static_cast<std::size_t>(words.back().data() + words.back().size() - text.data());
    return text.substr(begin, end - begin);
}

std::string ascii_lower(std::string_view text) {
    std::string out(text);
    for (auto& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

}  // namespace service_rag
