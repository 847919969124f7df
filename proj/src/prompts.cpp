#include "service_rag/prompts.hpp"

#include <cctype>
#include <optional>

#include "service_rag/errors.hpp"
#include "service_rag/text.hpp"

namespace service_rag {

const std::string_view kRagPromptTemplate =
    "\n"
    "Answer the user questions in detail and explain all necessary solution steps. If the context does not\n"
    "contain any relevant information to answer the question, just say \"I don't know\":\n"
    "<context>{context}</context>";

namespace {

constexpr std::string_view kPlaceholder = "{context}";

void require_nonempty(std::string_view s, const char* what) {
    if (trim(s).empty()) throw InputError(std::string(what) + " is empty");
}

}  // namespace

std::string_view to_string(TemplateId id) {
    switch (id) {
        case TemplateId::rag_qa: return "rag_qa";
        case TemplateId::correction: return "correction";
        case TemplateId::summary: return "summary";
        case TemplateId::paraphrase: return "paraphrase";
    }
    return "rag_qa";
}

PromptBundle render_rag_prompt(std::span<const Chunk> context_chunks, std::string_view question) {
    require_nonempty(question, "question");

    std::string context;
    for (std::size_t i = 0; i < context_chunks.size(); ++i) {
        if (i > 0) context += "\n\n";
        context += context_chunks[i].text;
    }

    const auto at = kRagPromptTemplate.find(kPlaceholder);
    std::string system;
    system.reserve(kRagPromptTemplate.size() + context.size());
    system.append(kRagPromptTemplate.substr(0, at));
    system.append(context);
    system.append(kRagPromptTemplate.substr(at + kPlaceholder.size()));

    PromptBundle b;
    b.template_id = TemplateId::rag_qa;
    b.rendered_context = std::move(context);
    b.messages = {{ChatRole::system, std::move(system)}, {ChatRole::user, std::string(question)}};
    return b;
}

PromptBundle render_correction_prompt(std::string_view text) {
    require_nonempty(text, "text to correct");
    PromptBundle b;
    b.template_id = TemplateId::correction;
    b.messages = {
        {ChatRole::system,
         "You proofread technical customer service emails. Fix spelling and grammar only, preserve wording and "
         "content. Reply with the corrected email and nothing else."},
        {ChatRole::user, std::string(text)},
    };
    return b;
}

PromptBundle render_summary_prompt(std::string_view text, std::size_t target_words) {
    require_nonempty(text, "text to summarize");
    if (target_words == 0) throw InputError("target word count must be at least 1");
    const auto target = std::to_string(target_words) + " words";
    PromptBundle b;
    b.template_id = TemplateId::summary;
    b.messages = {
        {ChatRole::system,
         "You summarize technical customer service cases: the customer request and the message exchange that "
         "followed. Keep every solution step that matters."},
        {ChatRole::user, "Summarize the following case in exactly " + target + ".\n\n" + std::string(text)},
    };
    return b;
}

PromptBundle render_paraphrase_prompt(std::string_view request_text, std::size_t n) {
    require_nonempty(request_text, "request text");
    if (n == 0) throw InputError("paraphrase count must be at least 1");
    const auto count = std::to_string(n);
    PromptBundle b;
    b.template_id = TemplateId::paraphrase;
    b.messages = {
        {ChatRole::system,
         "You write synthetic customer inquiries for testing a support search engine. Each inquiry describes the "
         "same problem as the original but uses different formulations."},
        {ChatRole::user, "Produce " + count + " reformulations of the same problem. Write one per line, numbered as "
                         "\"1) \", \"2) \" and so on, with no other text.\n\nOriginal request:\n" +
                             std::string(request_text)},
    };
    return b;
}

std::vector<std::string> parse_paraphrases(std::string_view reply) {
    // Numbered lines: optional indentation, digits, ')', whitespace.
    auto numbered_body = [](std::string_view line) -> std::optional<std::string_view> {
        std::size_t i = 0;
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        const auto digits_begin = i;
        while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
        if (i == digits_begin || i >= line.size() || line[i] != ')') return std::nullopt;
        ++i;
        if (i < line.size() && line[i] != ' ' && line[i] != '\t') return std::nullopt;
        return line.substr(i);
    };

    std::vector<std::string_view> lines;
    for (std::size_t start = 0; start <= reply.size();) {
        auto end = reply.find('\n', start);
        if (end == std::string_view::npos) end = reply.size();
        lines.push_back(reply.substr(start, end - start));
        start = end + 1;
    }

    std::vector<std::string> out;
    bool any_numbered = false;
    for (auto line : lines) {
        if (auto body = numbered_body(line)) {
            any_numbered = true;
            out.emplace_back(trim(*body));
        } else if (any_numbered && !trim(line).empty()) {
            // Continuation of the previous numbered entry.
            out.back() += ' ';
            out.back() += trim(line);
        }
    }
    if (any_numbered) {
        std::erase_if(out, [](const std::string& s) { return s.empty(); });
        return out;
    }

    std::string current;
    for (auto line : lines) {
        if (trim(line).empty()) {
            if (!current.empty()) out.push_back(std::move(current));
            current.clear();
        } else {
            if (!current.empty()) current += ' ';
            current += trim(line);
        }
    }
    if (!current.empty()) out.push_back(std::move(current));
    return out;
}

}  // namespace service_rag
