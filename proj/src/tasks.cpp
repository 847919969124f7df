#include "service_rag/tasks.hpp"

#include "service_rag/errors.hpp"
#include "service_rag/prompts.hpp"
#include "service_rag/text.hpp"

namespace service_rag {

bool is_answered(std::string_view answer_text) {
    auto t = ascii_lower(trim(answer_text));
    while (!t.empty() && (t.back() == '.' || t.back() == '!')) t.pop_back();
    if (auto pos = t.find("\xE2\x80\x99"); pos != std::string::npos) t.replace(pos, 3, "'");
    return t != "i don't know";
}

CorrectionResult correct_text(std::string_view text, ChatProvider& chat, const GenerationConfig& cfg) {
    if (trim(text).empty()) throw InputError("correct_text: input text is empty");
    const auto prompt = render_correction_prompt(text);

    CorrectionResult r;
    r.original_text = std::string(text);
    r.corrected_text = chat.complete(prompt.messages, cfg);
    r.words_original = word_count(r.original_text);
    r.words_corrected = word_count(r.corrected_text);
    return r;
}

SummaryResult summarize(std::string_view source_id, std::string_view source_text, std::size_t target_words,
                        ChatProvider& chat, const GenerationConfig& cfg) {
    if (trim(source_text).empty()) throw InputError("summarize: source text is empty");
    if (target_words == 0) throw InputError("summarize: target word count must be at least 1");
    const auto prompt = render_summary_prompt(source_text, target_words);

    SummaryResult r;
    r.source_id = std::string(source_id);
    r.target_words = target_words;
    r.summary_text = chat.complete(prompt.messages, cfg);
    r.summary_words = word_count(r.summary_text);
    return r;
}

AnswerResult answer_question(std::string_view question, const VectorIndex& index, EmbeddingProvider& embedder,
                             ChatProvider& chat, std::size_t k, const GenerationConfig& cfg) {
    if (trim(question).empty()) throw InputError("answer_question: question is empty");
    if (k == 0) throw InputError("answer_question: k must be at least 1");

    AnswerResult r;
    r.question = std::string(question);
    if (!index.empty() && embedder.model_id() != index.model_id()) {
        throw ModelMismatchError("index was built with model '" + index.model_id() + "' but the embedder is '" +
                                 embedder.model_id() + "'");
    }
    r.hits = index.search(embedder.embed_one(r.question), k);

    std::vector<Chunk> context;
    context.reserve(r.hits.size());
    for (const auto& h : r.hits) context.push_back(h.chunk);
    const auto prompt = render_rag_prompt(context, question);

    r.answer_text = chat.complete(prompt.messages, cfg);
    r.answered = is_answered(r.answer_text);
    return r;
}

}  // namespace service_rag
