#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "service_rag/chunker.hpp"
#include "service_rag/generation.hpp"

namespace service_rag {

enum class TemplateId { rag_qa, correction, summary, paraphrase };

std::string_view to_string(TemplateId id);

struct PromptBundle {
    std::vector<ChatMessage> messages;
    TemplateId template_id = TemplateId::rag_qa;
    std::string rendered_context;

    bool operator==(const PromptBundle&) const = default;
};

/// RAG system prompt with its single `{context}` placeholder.
extern const std::string_view kRagPromptTemplate;

/// System message: kRagPromptTemplate with `{context}` replaced, in one
/// literal pass, by the chunk texts joined with blank lines. User message:
/// the question. Throws InputError on an empty question.
PromptBundle render_rag_prompt(std::span<const Chunk> context_chunks, std::string_view question);

PromptBundle render_correction_prompt(std::string_view text);

/// The user message states the literal target, e.g. "100 words".
PromptBundle render_summary_prompt(std::string_view text, std::size_t target_words);

/// Asks for `n` reformulations, one per line as `1) ...`, `2) ...`.
PromptBundle render_paraphrase_prompt(std::string_view request_text, std::size_t n);

/// Splits a paraphrase reply on `n) ` line prefixes; if none are present,
/// falls back to blank-line separated paragraphs. Entries are trimmed and
/// empty ones dropped.
std::vector<std::string> parse_paraphrases(std::string_view reply);

}  // namespace service_rag
