#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "service_rag/eval.hpp"

namespace service_rag {

// JSONL inputs for the evaluation commands. Blank lines are skipped; a
// malformed line throws ParseError naming file:line.

/// {"id", "incident_id", "text"} per line. Also the paraphrase output format.
std::vector<RetrievalQuery> load_queries(const std::filesystem::path& path);
std::string queries_to_jsonl(std::span<const RetrievalQuery> queries);

/// {"id", "incident_id", "answer"} per line.
std::vector<AnswerRecord> load_answers(const std::filesystem::path& path);

/// A clean reply email used as the correction reference.
struct ReferenceEmail {
    std::string id;
    std::string text;
    /// Per-email typo count; 0 means "use the command default".
    std::size_t errors = 0;
};

/// {"id", "text", "errors"?} per line.
std::vector<ReferenceEmail> load_reference_emails(const std::filesystem::path& path);

}  // namespace service_rag
