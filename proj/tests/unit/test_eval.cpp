#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "service_rag/errors.hpp"
#include "service_rag/eval.hpp"
#include "service_rag/text.hpp"

using namespace service_rag;
namespace fx = service_rag::testing;

namespace {

// Independent reference: full-table Levenshtein over word vectors.
std::size_t oracle_word_distance(const std::vector<std::string_view>& a, const std::vector<std::string_view>& b) {
    std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
    for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
    for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
        }
    }
    return d[a.size()][b.size()];
}

std::string apply_edit(const TypoEdit& e) {
    auto w = e.original_word;
    if (e.kind == TypoKind::transpose_adjacent) std::swap(w[e.char_position], w[e.char_position + 1]);
    else w.erase(e.char_position, 1);
    return w;
}

VectorIndex fixture_index(EmbeddingProvider& embedder, const ChunkerConfig& cfg) {
    const auto corpus = fx::make_vocab_corpus(15);
    const auto chunks = chunk_corpus(corpus, cfg);
    std::vector<std::string> texts;
    for (const auto& c : chunks) texts.push_back(c.text);
    VectorIndex index(embedder.model_id(), MockEmbedder::kDim);
    index.add(chunks, embedder.embed(texts));
    return index;
}

}  // namespace

TEST(InjectTypos, GoldenTransposition) {
    TypoInjectorConfig cfg;
    cfg.seed = 14;  // recorded reference run
    cfg.error_count = 1;
    cfg.transpose_weight = 1.0;
    cfg.delete_weight = 0.0;
    const auto r = inject_typos("the server restarts", cfg);
    EXPECT_EQ(r.corrupted_text, "the sevrer restarts");
    ASSERT_EQ(r.edits.size(), 1u);
    EXPECT_EQ(r.edits[0], (TypoEdit{1, TypoKind::transpose_adjacent, 2, "server", "sevrer"}));
}

TEST(InjectTypos, ConsistentWithCounterOverSeeds) {
    for (const auto& email : fx::fixture_emails()) {
        const auto ref_words = split_whitespace(email);
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            TypoInjectorConfig cfg;
            cfg.seed = seed;
            cfg.error_count = 1 + seed % 25;
            const auto r = inject_typos(email, cfg);
            ASSERT_EQ(count_errors(email, r.corrupted_text), cfg.error_count) << seed;
            ASSERT_EQ(r.edits.size(), cfg.error_count);

            const auto words = split_whitespace(r.corrupted_text);
            ASSERT_EQ(words.size(), ref_words.size());
            std::size_t e = 0;
            for (std::size_t i = 0; i < words.size(); ++i) {
                if (e < r.edits.size() && r.edits[e].word_index == i) {
                    const auto& edit = r.edits[e++];
                    EXPECT_EQ(edit.original_word, ref_words[i]);
                    EXPECT_EQ(edit.corrupted_word, words[i]);
                    EXPECT_EQ(apply_edit(edit), edit.corrupted_word);
                    EXPECT_NE(words[i], ref_words[i]);
                } else {
                    EXPECT_EQ(words[i], ref_words[i]);
                }
            }
            EXPECT_EQ(e, r.edits.size());
        }
    }
}

TEST(InjectTypos, PreservesWhitespace) {
    const std::string text = "Please  restart\tthe\nserver today, thanks.";
    TypoInjectorConfig cfg;
    cfg.error_count = 3;
    const auto r = inject_typos(text, cfg);
    std::string a, b;
    for (char c : text) if (std::isspace(static_cast<unsigned char>(c))) a += c;
    for (char c : r.corrupted_text) if (std::isspace(static_cast<unsigned char>(c))) b += c;
    EXPECT_EQ(a, b);
}

TEST(InjectTypos, Deterministic) {
    TypoInjectorConfig cfg;
    cfg.seed = 1234;
    cfg.error_count = 10;
    const auto email = fx::fixture_emails()[1];
    EXPECT_EQ(inject_typos(email, cfg).corrupted_text, inject_typos(email, cfg).corrupted_text);
    cfg.seed = 1235;
    TypoInjectorConfig other = cfg;
    other.seed = 1234;
    EXPECT_NE(inject_typos(email, cfg).corrupted_text, inject_typos(email, other).corrupted_text);
}

TEST(InjectTypos, IncidentOneFixture) {
    const auto email = fx::fixture_emails()[0];
    EXPECT_EQ(word_count(email), 172u);
    TypoInjectorConfig cfg;
    cfg.error_count = 25;
    const auto r = inject_typos(email, cfg);
    EXPECT_EQ(count_errors(email, r.corrupted_text), 25u);
    EXPECT_EQ(word_count(r.corrupted_text), 172u);
}

TEST(InjectTypos, ConfigAndInputErrors) {
    TypoInjectorConfig cfg;
    cfg.error_count = 0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    EXPECT_THROW(inject_typos("the server restarts", cfg), ConfigError);
    cfg.error_count = 1;
    cfg.transpose_weight = 0.7;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg.transpose_weight = 0.5;
    cfg.error_count = 3;
    EXPECT_THROW(inject_typos("a bb ccc", cfg), InputError);
}

TEST(CountErrors, Examples) {
    EXPECT_EQ(count_errors("same text here", "same text here"), 0u);
    EXPECT_EQ(count_errors("a b c", "a c"), 1u);
    EXPECT_EQ(count_errors("a b c", "a x c"), 1u);
    EXPECT_EQ(count_errors("", "a b"), 2u);
    EXPECT_EQ(count_errors("a  b\n", " a b"), 0u);
}

TEST(CountErrors, MatchesOracle) {
    std::mt19937_64 rng(31);
    const std::vector<std::string> vocab{"a", "b", "c", "dd", "e"};
    for (int i = 0; i < 300; ++i) {
        std::string x, y;
        for (std::size_t j = 0, n = rng() % 12; j < n; ++j) x += vocab[rng() % vocab.size()] + " ";
        for (std::size_t j = 0, n = rng() % 12; j < n; ++j) y += vocab[rng() % vocab.size()] + " ";
        EXPECT_EQ(count_errors(x, y), oracle_word_distance(split_whitespace(x), split_whitespace(y))) << x << "|" << y;
    }
}

TEST(EvalCorrection, Semantics) {
    const auto ref = fx::fixture_emails()[2];
    TypoInjectorConfig cfg;
    cfg.error_count = 7;
    const auto bad = inject_typos(ref, cfg).corrupted_text;

    const auto perfect = eval_correction("Inc3", ref, bad, ref);
    EXPECT_EQ(perfect.incident_id, "Inc3");
    EXPECT_EQ(perfect.errors_injected, 7u);
    EXPECT_EQ(perfect.errors_removed, 7u);
    EXPECT_EQ(perfect.words_original, word_count(bad));
    EXPECT_EQ(perfect.words_final, word_count(ref));

    EXPECT_EQ(eval_correction("x", ref, bad, bad).errors_removed, 0u);
    // A corrector that makes things worse is floored at zero.
    EXPECT_EQ(eval_correction("x", ref, bad, bad + " extra words added").errors_removed, 0u);
}

TEST(EvalSummary, IdentityAndTimeSaved) {
    MockEmbedder m;
    const auto source = fx::numbered_tokens(500);
    SummaryResult same{"Inc1", 100, source, 500};
    const auto r = eval_summary(source, same, m);
    EXPECT_EQ(r.cs, 1.0);
    EXPECT_EQ(r.time_saved_min, 0.0);

    SummaryResult shorter{"Inc1", 100, fx::numbered_tokens(100), 100};
    const auto s = eval_summary(source, shorter, m);
    EXPECT_DOUBLE_EQ(s.time_saved_min, 2.0);
    EXPECT_EQ(s.summary_words, 100u);
    EXPECT_EQ(s.target_words, 100u);
    EXPECT_GT(s.cs, 0.0);
    EXPECT_LT(s.cs, 1.0);
    EXPECT_DOUBLE_EQ(eval_summary(source, shorter, m, 400.0).time_saved_min, 1.0);
}

TEST(EvalRetrieval, FixtureSweep) {
    MockEmbedder m;
    const auto index = fixture_index(m, {12, 2});
    const auto queries = fx::make_paraphrase_queries(fx::make_vocab_corpus(15), 2, 1);
    double previous = 1.0;
    for (std::size_t k : {1, 2, 3}) {
        const auto r = eval_retrieval(queries, index, m, k);
        EXPECT_EQ(r.k, k);
        EXPECT_EQ(r.per_query_relevant_fraction.size(), queries.size());
        EXPECT_GE(r.average_proportion, 0.0);
        EXPECT_LE(r.average_proportion, previous);
        if (k == 1) {
            EXPECT_EQ(r.average_proportion, 1.0);
        }
        previous = r.average_proportion;
    }
}

TEST(EvalRetrieval, FractionsAreHitsOverK) {
    MockEmbedder m;
    const auto index = fixture_index(m, {});  // one chunk per incident
    const std::vector<RetrievalQuery> q{{"q", fx::make_vocab_corpus(1).incidents[0].request_text, "Inc1"}};
    EXPECT_EQ(eval_retrieval(q, index, m, 1).average_proportion, 1.0);
    EXPECT_EQ(eval_retrieval(q, index, m, 2).average_proportion, 0.5);
    EXPECT_EQ(eval_retrieval(q, index, m, 4).average_proportion, 0.25);
}

TEST(EvalRetrieval, Errors) {
    MockEmbedder m;
    VectorIndex empty(m.model_id(), MockEmbedder::kDim);
    const std::vector<RetrievalQuery> q{{"q", "text", "Inc1"}};
    EXPECT_THROW(eval_retrieval(q, empty, m, 1), InputError);
    const auto index = fixture_index(m, {});
    EXPECT_THROW(eval_retrieval(q, index, m, 0), InputError);
}

TEST(EvalAnswers, TruthIsColumnMinimum) {
    MockEmbedder m;
    const auto corpus = fx::make_vocab_corpus(15);
    const auto index = fixture_index(m, {12, 2});
    std::vector<AnswerRecord> answers;
    for (const auto& inc : corpus.incidents) answers.push_back({inc.id + "-a", inc.id, inc.exchange[0].text});
    const auto mx = eval_answers(answers, index, m);
    ASSERT_EQ(mx.incident_ids.size(), 15u);
    ASSERT_EQ(mx.query_ids.size(), 15u);
    for (std::size_t col = 0; col < 15; ++col) {
        const auto truth = static_cast<std::size_t>(
            std::find(mx.incident_ids.begin(), mx.incident_ids.end(), mx.truth_incident_ids[col]) -
            mx.incident_ids.begin());
        for (std::size_t row = 0; row < 15; ++row) {
            if (row != truth) {
                EXPECT_LT(mx.at(truth, col), mx.at(row, col)) << row << "," << col;
            }
        }
    }
    EXPECT_LT(mx.diagonal_mean, mx.nearest_offdiagonal_mean);
}

TEST(EvalAnswers, VerbatimChunkHasZeroDistance) {
    MockEmbedder m;
    const auto index = fixture_index(m, {12, 2});
    const std::vector<AnswerRecord> answers{{"q1", "Inc4", index.chunk(7).text}};
    ASSERT_EQ(index.chunk(7).incident_id, "Inc4");
    const auto mx = eval_answers(answers, index, m);
    EXPECT_EQ(mx.at(3, 0), 0.0);
    EXPECT_EQ(mx.diagonal_mean, 0.0);
}

TEST(EvalAnswers, SingleIncidentHasNoOffDiagonal) {
    MockEmbedder m;
    VectorIndex index(m.model_id(), MockEmbedder::kDim);
    index.add(std::vector<Chunk>{{"A", 0, "alpha beta", 0, 2}}, m.embed(std::vector<std::string>{"alpha beta"}));
    const std::vector<AnswerRecord> answers{{"q1", "A", "alpha"}};
    EXPECT_TRUE(std::isnan(eval_answers(answers, index, m).nearest_offdiagonal_mean));
}

TEST(EvalAnswers, UnknownTruthIncidentIsAnInputError) {
    MockEmbedder m;
    const auto index = fixture_index(m, {});
    const std::vector<AnswerRecord> answers{{"q1", "Nope", "alpha"}};
    EXPECT_THROW(eval_answers(answers, index, m), InputError);
}
