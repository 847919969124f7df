#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "service_rag/corpus.hpp"
#include "service_rag/eval.hpp"

namespace service_rag::testing {

/// Pronounceable lowercase word, distinct for every n.
std::string synthetic_word(std::size_t n);

/// Incidents whose documents draw on pairwise disjoint vocabularies; no two
/// fixture words share a mock-embedder bucket. Incident i has id "Inc<i+1>",
/// request = its first 8 words + ".", one agent reply = the other 8 + ".".
inline constexpr std::size_t kWordsPerIncident = 16;
inline constexpr std::size_t kMaxIncidents = 15;
Corpus make_vocab_corpus(std::size_t incidents = kMaxIncidents);

/// Words the paraphrase queries add around the incident words.
const std::vector<std::string>& filler_words();

/// Vocabulary of one incident from make_vocab_corpus.
std::vector<std::string> incident_vocabulary(std::size_t incident_index);

/// Reformulations built from a shuffled subset of the truth incident's
/// words (four from the request, two from the end of the reply) plus shared
/// filler words that no incident uses.
std::vector<RetrievalQuery> make_paraphrase_queries(const Corpus& corpus, std::size_t per_incident,
                                                    std::uint64_t seed);

/// Three clean reply emails used as correction references. The first one is
/// 172 words long.
std::vector<std::string> fixture_emails();

/// "t0 t1 ... t<n-1>".
std::string numbered_tokens(std::size_t n);

/// Small reports pinned by the files in tests/golden.
CorrectionReport sample_correction_report();
SummaryReport sample_summary_report();
std::vector<RetrievalEvalReport> sample_retrieval_reports();
AnswerDistanceMatrix sample_answer_matrix();

/// Contents of a file in tests/golden.
std::string read_golden(const std::string& name);

void write_corpus_jsonl(const Corpus& corpus, const std::filesystem::path& path);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const noexcept { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

}  // namespace service_rag::testing
