#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "service_rag/embedder.hpp"
#include "service_rag/generation.hpp"
#include "service_rag/index.hpp"

namespace service_rag {

inline constexpr std::size_t kDefaultRetrievalK = 2;

struct CorrectionResult {
    std::string original_text;
    std::string corrected_text;
    std::size_t words_original = 0;
    std::size_t words_corrected = 0;
};

struct SummaryResult {
    std::string source_id;
    std::size_t target_words = 0;
    std::string summary_text;
    std::size_t summary_words = 0;
};

struct AnswerResult {
    std::string question;
    std::vector<RetrievalHit> hits;
    std::string answer_text;
    bool answered = false;
};

/// One completion with the correction prompt.
CorrectionResult correct_text(std::string_view text, ChatProvider& chat, const GenerationConfig& cfg);

/// One completion with the summary prompt. The length is measured, not
/// enforced.
SummaryResult summarize(std::string_view source_id, std::string_view source_text, std::size_t target_words,
                        ChatProvider& chat, const GenerationConfig& cfg);

/// Embeds the question, retrieves the top-k chunks, and asks the chat
/// provider with the RAG prompt. One embedding call, one search, one
/// completion.
AnswerResult answer_question(std::string_view question, const VectorIndex& index, EmbeddingProvider& embedder,
                             ChatProvider& chat, std::size_t k, const GenerationConfig& cfg);

/// True unless the reply is just "I don't know": ASCII case-insensitive,
/// trailing '.' or '!' ignored, typographic apostrophe accepted.
bool is_answered(std::string_view answer_text);

}  // namespace service_rag
