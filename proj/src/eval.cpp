#include "service_rag/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_set>

#include "service_rag/errors.hpp"
#include "service_rag/text.hpp"

namespace service_rag {

std::string_view to_string(TypoKind kind) {
    return kind == TypoKind::transpose_adjacent ? "transpose_adjacent" : "delete_char";
}

void TypoInjectorConfig::validate() const {
    if (error_count == 0) throw ConfigError("typo error_count must be at least 1");
    if (!(transpose_weight >= 0.0) || !(delete_weight >= 0.0)) throw ConfigError("typo weights must be >= 0");
    if (std::abs(transpose_weight + delete_weight - 1.0) > 1e-9) throw ConfigError("typo weights must sum to 1");
}

namespace {

// std::uniform_int_distribution is implementation-defined; these helpers keep
// injected typos identical across standard libraries.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

double uniform_unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

bool is_eligible(std::string_view word) {
    return word.size() >= 3 && std::all_of(word.begin(), word.end(), [](char c) {
               return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
           });
}

std::string apply(std::string_view word, TypoKind kind, std::size_t pos) {
    std::string out(word);
    if (kind == TypoKind::transpose_adjacent) {
        std::swap(out[pos], out[pos + 1]);
    } else {
        out.erase(pos, 1);
    }
    return out;
}

}  // namespace

TypoInjection inject_typos(std::string_view text, const TypoInjectorConfig& cfg) {
    cfg.validate();
    const auto words = split_whitespace(text);

    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (is_eligible(words[i])) eligible.push_back(i);
    }
    if (eligible.size() < cfg.error_count) {
        throw InputError("text has " + std::to_string(eligible.size()) + " eligible words, need " +
                         std::to_string(cfg.error_count));
    }
    const std::unordered_set<std::string_view> vocabulary(words.begin(), words.end());

    std::mt19937_64 rng(cfg.seed);
    for (std::size_t i = eligible.size(); i > 1; --i) {
        std::swap(eligible[i - 1], eligible[uniform_below(rng, i)]);
    }

    std::vector<TypoEdit> edits;
    for (std::size_t word_index : eligible) {
        if (edits.size() == cfg.error_count) break;
        const auto word = words[word_index];

        const TypoKind first = uniform_unit(rng) < cfg.transpose_weight ? TypoKind::transpose_adjacent
                                                                         : TypoKind::delete_char;
        const TypoKind second = first == TypoKind::transpose_adjacent ? TypoKind::delete_char
                                                                      : TypoKind::transpose_adjacent;
        for (TypoKind kind : {first, second}) {
            const double weight = kind == TypoKind::transpose_adjacent ? cfg.transpose_weight : cfg.delete_weight;
            if (weight == 0.0) continue;

            const std::size_t slots = kind == TypoKind::transpose_adjacent ? word.size() - 1 : word.size();
            std::vector<std::size_t> positions;
            for (std::size_t p = 0; p < slots; ++p) {
                if (kind == TypoKind::transpose_adjacent && word[p] == word[p + 1]) continue;
                if (vocabulary.contains(apply(word, kind, p))) continue;
                positions.push_back(p);
            }
            if (positions.empty()) continue;

            const auto pos = positions[uniform_below(rng, positions.size())];
            edits.push_back({word_index, kind, pos, std::string(word), apply(word, kind, pos)});
            break;
        }
    }
    if (edits.size() < cfg.error_count) {
        throw InputError("could only place " + std::to_string(edits.size()) + " of " +
                         std::to_string(cfg.error_count) + " typos");
    }
    std::sort(edits.begin(), edits.end(), [](const auto& a, const auto& b) { return a.word_index < b.word_index; });

    TypoInjection out;
    std::size_t copied = 0;
    for (const auto& e : edits) {
        const auto w = words[e.word_index];
        const auto begin = static_cast<std::size_t>(w.data() - text.data());
        out.corrupted_text.append(text.substr(copied, begin - copied));
        out.corrupted_text.append(e.corrupted_word);
        copied = begin + w.size();
    }
    out.corrupted_text.append(text.substr(copied));
    out.edits = std::move(edits);
    return out;
}

std::size_t count_errors(std::string_view reference, std::string_view candidate) {
    const auto a = split_whitespace(reference);
    const auto b = split_whitespace(candidate);
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    std::iota(prev.begin(), prev.end(), std::size_t{0});
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

CorrectionRow eval_correction(std::string_view incident_id, std::string_view reference, std::string_view corrupted,
                              std::string_view corrected) {
    if (trim(reference).empty() || trim(corrupted).empty() || trim(corrected).empty()) {
        throw InputError("eval_correction: texts must be nonempty");
    }
    CorrectionRow row;
    row.incident_id = std::string(incident_id);
    row.words_original = word_count(corrupted);
    row.errors_injected = count_errors(reference, corrupted);
    row.words_final = word_count(corrected);
    const auto remaining = count_errors(reference, corrected);
    row.errors_removed = row.errors_injected > remaining ? row.errors_injected - remaining : 0;
    return row;
}

SummaryEvalRow eval_summary(std::string_view source_text, const SummaryResult& result, EmbeddingProvider& embedder,
                            double reading_wpm) {
    if (!(reading_wpm > 0.0)) throw InputError("reading_wpm must be positive");
    const std::vector<std::string> texts = {std::string(source_text), result.summary_text};
    const auto emb = embedder.embed(texts);

    SummaryEvalRow row;
    row.incident_id = result.source_id;
    row.target_words = result.target_words;
    row.summary_words = result.summary_words;
    row.cs = cosine_similarity(emb[0], emb[1]);
    const double saved_words = static_cast<double>(word_count(source_text)) - static_cast<double>(result.summary_words);
    row.time_saved_min = std::max(0.0, saved_words / reading_wpm);
    return row;
}

RetrievalEvalReport eval_retrieval(std::span<const RetrievalQuery> queries, const VectorIndex& index,
                                   EmbeddingProvider& embedder, std::size_t k) {
    if (index.empty()) throw InputError("eval_retrieval: index is empty");
    if (k == 0) throw InputError("eval_retrieval: k must be at least 1");

    std::vector<std::string> texts;
    texts.reserve(queries.size());
    for (const auto& q : queries) texts.push_back(q.text);
    const auto emb = texts.empty() ? std::vector<Embedding>{} : embedder.embed(texts);

    RetrievalEvalReport report;
    report.k = k;
    for (std::size_t i = 0; i < queries.size(); ++i) {
        const auto hits = index.search(emb[i], k);
        const auto relevant = std::count_if(hits.begin(), hits.end(), [&](const RetrievalHit& h) {
            return h.chunk.incident_id == queries[i].truth_incident_id;
        });
        report.per_query_relevant_fraction.push_back(static_cast<double>(relevant) / static_cast<double>(k));
    }
    if (!queries.empty()) {
        const double sum = std::accumulate(report.per_query_relevant_fraction.begin(),
                                           report.per_query_relevant_fraction.end(), 0.0);
        report.average_proportion = sum / static_cast<double>(queries.size());
    }
    return report;
}

AnswerDistanceMatrix eval_answers(std::span<const AnswerRecord> answers, const VectorIndex& index,
                                  EmbeddingProvider& embedder) {
    if (index.empty()) throw InputError("eval_answers: index is empty");

    AnswerDistanceMatrix m;
    m.incident_ids = index.incident_ids();
    std::vector<std::string> texts;
    for (const auto& a : answers) {
        if (std::find(m.incident_ids.begin(), m.incident_ids.end(), a.truth_incident_id) == m.incident_ids.end()) {
            throw InputError("answer '" + a.query_id + "' refers to incident '" + a.truth_incident_id +
                             "' which is not in the index");
        }
        m.query_ids.push_back(a.query_id);
        m.truth_incident_ids.push_back(a.truth_incident_id);
        texts.push_back(a.answer_text);
    }
    const auto emb = texts.empty() ? std::vector<Embedding>{} : embedder.embed(texts);

    m.cells.assign(m.incident_ids.size(), std::vector<double>(answers.size(), 0.0));
    double diag_sum = 0.0;
    double off_sum = 0.0;
    for (std::size_t col = 0; col < answers.size(); ++col) {
        const auto nearest = index.nearest_distance_per_incident(emb[col]);
        double off_min = std::numeric_limits<double>::infinity();
        for (std::size_t row = 0; row < m.incident_ids.size(); ++row) {
            const double d = nearest.at(m.incident_ids[row]);
            m.cells[row][col] = d;
            if (m.incident_ids[row] == m.truth_incident_ids[col]) {
                diag_sum += d;
            } else {
                off_min = std::min(off_min, d);
            }
        }
        off_sum += off_min;
    }
    const double n = static_cast<double>(answers.size());
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    m.diagonal_mean = answers.empty() ? nan : diag_sum / n;
    m.nearest_offdiagonal_mean = answers.empty() || m.incident_ids.size() < 2 ? nan : off_sum / n;
    return m;
}

}  // namespace service_rag
