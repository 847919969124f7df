#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "service_rag/chunker.hpp"
#include "service_rag/errors.hpp"
#include "service_rag/text.hpp"

using namespace service_rag;
using service_rag::testing::numbered_tokens;

namespace {

using Span = std::pair<std::size_t, std::size_t>;

std::vector<Span> spans(const std::vector<Chunk>& chunks) {
    std::vector<Span> out;
    for (const auto& c : chunks) out.emplace_back(c.token_start, c.token_end);
    return out;
}

// Reference slicing over the token list.
std::vector<Span> oracle_spans(std::size_t n, std::size_t size, std::size_t overlap) {
    std::vector<Span> out;
    if (n == 0) return out;
    for (std::size_t start = 0;; start += size - overlap) {
        out.emplace_back(start, std::min(start + size, n));
        if (start + size >= n) break;
    }
    return out;
}

}  // namespace

TEST(Chunker, TwentyFiveHundredTokens) {
    const auto chunks = split_into_chunks("d", numbered_tokens(2500), {1000, 20});
    EXPECT_EQ(spans(chunks), (std::vector<Span>{{0, 1000}, {980, 1980}, {1960, 2500}}));
    EXPECT_EQ(chunks[1].seq, 1u);
    EXPECT_EQ(chunks[1].incident_id, "d");
    EXPECT_TRUE(chunks[1].text.starts_with("t980 "));
    EXPECT_TRUE(chunks[1].text.ends_with(" t1979"));
}

TEST(Chunker, ShortTextIsOneChunk) {
    const auto text = numbered_tokens(500);
    const auto chunks = split_into_chunks("d", text, {1000, 20});
    EXPECT_EQ(spans(chunks), (std::vector<Span>{{0, 500}}));
    EXPECT_EQ(chunks[0].text, text);
}

TEST(Chunker, ExactFitIsOneChunk) {
    EXPECT_EQ(spans(split_into_chunks("d", numbered_tokens(1000), {1000, 20})), (std::vector<Span>{{0, 1000}}));
}

TEST(Chunker, EmptyTextHasNoChunks) {
    EXPECT_TRUE(split_into_chunks("d", "", {}).empty());
    EXPECT_TRUE(split_into_chunks("d", " \n ", {}).empty());
}

TEST(Chunker, RejectsBadConfig) {
    EXPECT_THROW((ChunkerConfig{10, 10}.validate()), ConfigError);
    EXPECT_THROW((ChunkerConfig{0, 0}.validate()), ConfigError);
    EXPECT_THROW(split_into_chunks("d", "a b", {5, 7}), ConfigError);
    EXPECT_NO_THROW((ChunkerConfig{10, 0}.validate()));
}

TEST(Chunker, ChunkTextIsSourceSlice) {
    const std::string text = "Hello,  world!\nThe printer\tis offline.";
    const auto chunks = split_into_chunks("d", text, {3, 1});
    const auto tok = tokenize(text);
    for (const auto& c : chunks) {
        const auto begin = tok.tokens[c.token_start].offset;
        const auto& last = tok.tokens[c.token_end - 1];
        EXPECT_EQ(c.text, text.substr(begin, last.offset + last.text.size() - begin));
    }
    EXPECT_EQ(chunks.front().text, "Hello,  world");
}

TEST(Chunker, CoverageAndOverlapProperties) {
    std::mt19937_64 rng(42);
    for (int iter = 0; iter < 300; ++iter) {
        const std::size_t n = rng() % 400;
        const std::size_t size = 1 + rng() % 50;
        const std::size_t overlap = rng() % size;
        const auto chunks = split_into_chunks("d", numbered_tokens(n), {size, overlap});
        ASSERT_EQ(spans(chunks), oracle_spans(n, size, overlap)) << n << " " << size << " " << overlap;
        if (n == 0) continue;
        EXPECT_EQ(chunks.front().token_start, 0u);
        EXPECT_EQ(chunks.back().token_end, n);
        for (std::size_t i = 0; i < chunks.size(); ++i) {
            EXPECT_EQ(chunks[i].seq, i);
            EXPECT_LE(chunks[i].token_end - chunks[i].token_start, size);
            EXPECT_GT(chunks[i].token_end, chunks[i].token_start);
            if (i > 0) {
                EXPECT_EQ(chunks[i].token_start, chunks[i - 1].token_start + size - overlap);
                EXPECT_EQ(chunks[i - 1].token_end - chunks[i].token_start, overlap);
            }
        }
    }
}

TEST(Chunker, CorpusChunksInOrder) {
    const auto corpus = service_rag::testing::make_vocab_corpus(3);
    const auto chunks = chunk_corpus(corpus, {12, 2});
    ASSERT_EQ(chunks.size(), 6u);
    EXPECT_EQ(chunks[0].incident_id, "Inc1");
    EXPECT_EQ(chunks[5].incident_id, "Inc3");
    EXPECT_EQ(chunks[5].seq, 1u);
}
