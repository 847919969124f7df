#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace service_rag {

/// One token and its byte offset in the source text.
struct Token {
    std::string text;
    std::size_t offset = 0;

    bool operator==(const Token&) const = default;
};

/// Tokens plus the separators around them.
///
/// separators.size() == tokens.size() + 1: separators[i] precedes tokens[i]
/// and separators.back() trails the last token. Interleaving the two
/// reproduces the source byte-for-byte (see detokenize).
struct Tokenization {
    std::vector<Token> tokens;
    std::vector<std::string> separators;
};

/// Splits on Unicode whitespace; every punctuation code point becomes its own
/// token. Invalid UTF-8 bytes are kept as word bytes so round-tripping holds
/// for arbitrary input.
Tokenization tokenize(std::string_view text);

/// Token strings only.
std::vector<std::string> tokenize_words(std::string_view text);

std::string detokenize(const Tokenization& t);

/// Number of maximal runs of non-whitespace.
std::size_t word_count(std::string_view text);

/// Whitespace-delimited words, in order.
std::vector<std::string_view> split_whitespace(std::string_view text);

bool is_unicode_whitespace(char32_t cp) noexcept;
bool is_punctuation(char32_t cp) noexcept;

/// Removes leading and trailing Unicode whitespace.
std::string_view trim(std::string_view text);

std::string ascii_lower(std::string_view text);

}  // namespace service_rag
