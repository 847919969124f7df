#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "service_rag/embedder.hpp"
#include "service_rag/index.hpp"
#include "service_rag/tasks.hpp"

namespace service_rag {

// ---------------------------------------------------------------------------
// Typo injection and error counting

enum class TypoKind { transpose_adjacent, delete_char };

std::string_view to_string(TypoKind kind);

struct TypoInjectorConfig {
    std::uint64_t seed = 1;
    std::size_t error_count = 1;
    double transpose_weight = 0.5;
    double delete_weight = 0.5;

    /// error_count >= 1, weights >= 0 summing to 1.
    void validate() const;
};

struct TypoEdit {
    std::size_t word_index = 0;     // among whitespace-delimited words
    TypoKind kind = TypoKind::transpose_adjacent;
    std::size_t char_position = 0;  // transposed pair start, or deleted char
    std::string original_word;
    std::string corrupted_word;

    bool operator==(const TypoEdit&) const = default;
};

struct TypoInjection {
    std::string corrupted_text;
    std::vector<TypoEdit> edits;  // sorted by word_index
};

/// Applies exactly cfg.error_count edits to distinct eligible words (ASCII
/// letters only, length >= 3). Whitespace is preserved. A corrupted word never
/// coincides with any word of the input, so count_errors(text, result)
/// equals error_count. Deterministic for a given seed on every platform.
/// Throws InputError when there are too few eligible words.
TypoInjection inject_typos(std::string_view text, const TypoInjectorConfig& cfg);

/// Word-level Levenshtein distance between the whitespace token sequences.
std::size_t count_errors(std::string_view reference, std::string_view candidate);

// ---------------------------------------------------------------------------
// Report rows

struct CorrectionRow {
    std::string incident_id;
    std::size_t words_original = 0;
    std::size_t errors_injected = 0;
    std::size_t words_final = 0;
    std::size_t errors_removed = 0;

    bool operator==(const CorrectionRow&) const = default;
};

struct CorrectionReport {
    std::vector<CorrectionRow> rows;
};

/// errors_removed = max(0, errors(ref, corrupted) - errors(ref, corrected)).
CorrectionRow eval_correction(std::string_view incident_id, std::string_view reference, std::string_view corrupted,
                              std::string_view corrected);

struct SummaryEvalRow {
    std::string incident_id;
    std::size_t target_words = 0;
    std::size_t summary_words = 0;
    double cs = 0.0;
    double time_saved_min = 0.0;
};

struct SummaryReport {
    std::vector<SummaryEvalRow> rows;
};

inline constexpr double kDefaultReadingWpm = 200.0;

/// Cosine similarity of source and summary embeddings, plus the reading-time
/// estimate max(0, (source_words - summary_words) / reading_wpm).
SummaryEvalRow eval_summary(std::string_view source_text, const SummaryResult& result, EmbeddingProvider& embedder,
                            double reading_wpm = kDefaultReadingWpm);

struct RetrievalQuery {
    std::string id;
    std::string text;
    std::string truth_incident_id;
};

struct RetrievalEvalReport {
    std::size_t k = 0;
    std::vector<double> per_query_relevant_fraction;
    double average_proportion = 0.0;
};

/// Per query: |hits from the truth incident| / k; averaged over queries.
RetrievalEvalReport eval_retrieval(std::span<const RetrievalQuery> queries, const VectorIndex& index,
                                   EmbeddingProvider& embedder, std::size_t k);

struct AnswerRecord {
    std::string query_id;
    std::string truth_incident_id;
    std::string answer_text;
};

/// Cosine distance of each answer to the nearest chunk of each incident.
struct AnswerDistanceMatrix {
    std::vector<std::string> incident_ids;        // rows, index order
    std::vector<std::string> query_ids;           // columns
    std::vector<std::string> truth_incident_ids;  // per column
    std::vector<std::vector<double>> cells;       // cells[row][col]
    double diagonal_mean = 0.0;  // NaN when there are no answers
    /// Mean over columns of the smallest non-truth distance; NaN if the index
    /// holds a single incident or there are no answers.
    double nearest_offdiagonal_mean = 0.0;

    double at(std::size_t row, std::size_t col) const { return cells.at(row).at(col); }
};

AnswerDistanceMatrix eval_answers(std::span<const AnswerRecord> answers, const VectorIndex& index,
                                  EmbeddingProvider& embedder);

}  // namespace service_rag
