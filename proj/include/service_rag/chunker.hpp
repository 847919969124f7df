#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "service_rag/corpus.hpp"

namespace service_rag {

struct ChunkerConfig {
    std::size_t chunk_size_tokens = 1000;
    std::size_t overlap_tokens = 20;

    /// Throws ConfigError unless 0 <= overlap < chunk_size.
    void validate() const;
    std::size_t stride() const { return chunk_size_tokens - overlap_tokens; }
};

/// A contiguous token window [token_start, token_end) of one document.
struct Chunk {
    std::string incident_id;
    std::size_t seq = 0;
    std::string text;
    std::size_t token_start = 0;
    std::size_t token_end = 0;

    bool operator==(const Chunk&) const = default;
};

/// Consecutive chunk starts advance by chunk_size - overlap; the last chunk
/// may be shorter. `text` of each chunk is the exact source slice from its
/// first token to its last token. Empty text yields no chunks.
std::vector<Chunk> split_into_chunks(std::string_view doc_id, std::string_view text, const ChunkerConfig& cfg);

/// Chunks every incident's document, in corpus order.
std::vector<Chunk> chunk_corpus(const Corpus& corpus, const ChunkerConfig& cfg);

}  // namespace service_rag
