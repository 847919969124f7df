#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace service_rag {

enum class AuthorRole { customer, agent };

std::string_view to_string(AuthorRole role);

struct Message {
    AuthorRole author_role = AuthorRole::customer;
    std::string text;
    std::size_t position = 0;

    bool operator==(const Message&) const = default;
};

/// A historical customer request plus the expert exchange that resolved it.
struct Incident {
    std::string id;
    std::string request_text;
    std::vector<Message> exchange;
    std::vector<std::string> tags;

    bool operator==(const Incident&) const = default;
};

struct Corpus {
    std::vector<Incident> incidents;
    std::string source_path;
    std::chrono::system_clock::time_point loaded_at;
    /// Non-fatal load diagnostics (e.g. unknown JSONL fields).
    std::vector<std::string> warnings;

    const Incident* find(std::string_view id) const;
};

enum class CorpusFormat { jsonl, text_dir };

/// Loads incidents in file order.
///
/// jsonl: one object per line,
///   {"id", "request_text", "exchange": [{"author_role", "text"}], "tags"?}.
///   Blank lines are skipped; unknown fields produce a warning.
/// text_dir: one `*.txt` file per incident (sorted by file name, id = stem).
///   The request text comes first; each message starts with a `---` line
///   followed by a `role: customer|agent` line.
///
/// Throws ParseError naming file:line for malformed records and
/// DuplicateIdError for repeated ids. Empty or whitespace-only texts are
/// rejected.
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format);

/// jsonl for regular files, text_dir for directories.
CorpusFormat detect_corpus_format(const std::filesystem::path& path);

/// Throws DuplicateIdError / InputError if the incidents violate corpus
/// invariants.
void validate_incidents(const std::vector<Incident>& incidents);

/// The retrievable text of an incident: request and message texts joined by
/// blank lines. Also the summarization input.
std::string incident_document(const Incident& incident);

}  // namespace service_rag
