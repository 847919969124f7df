#include "service_rag/chunker.hpp"

#include <algorithm>

#include "service_rag/errors.hpp"
#include "service_rag/text.hpp"

namespace service_rag {

void ChunkerConfig::validate() const {
    if (chunk_size_tokens == 0) throw ConfigError("chunk_size_tokens must be positive");
    if (overlap_tokens >= chunk_size_tokens) {
        throw ConfigError("overlap_tokens (" + std::to_string(overlap_tokens) + ") must be smaller than chunk_size_tokens (" +
                          std::to_string(chunk_size_tokens) + ")");
    }
}

std::vector<Chunk> split_into_chunks(std::string_view doc_id, std::string_view text, const ChunkerConfig& cfg) {
    cfg.validate();
    const auto tokens = tokenize(text).tokens;
    const std::size_t n = tokens.size();

    std::vector<Chunk> chunks;
    for (std::size_t start = 0; start < n; start += cfg.stride()) {
        const std::size_t end = std::min(start + cfg.chunk_size_tokens, n);
        const std::size_t byte_begin = tokens[start].offset;
        const std::size_t byte_end = tokens[end - 1].offset + tokens[end - 1].text.size();

        Chunk c;
        c.incident_id = std::string(doc_id);
        c.seq = chunks.size();
        c.text = std::string(text.substr(byte_begin, byte_end - byte_begin));
        c.token_start = start;
        c.token_end = end;
        chunks.push_back(std::move(c));
        if (end == n) break;
    }
    return chunks;
}

std::vector<Chunk> chunk_corpus(const Corpus& corpus, const ChunkerConfig& cfg) {
    std::vector<Chunk> all;
    for (const auto& inc : corpus.incidents) {
        auto chunks = split_into_chunks(inc.id, incident_document(inc), cfg);
        std::move(chunks.begin(), chunks.end(), std::back_inserter(all));
    }
    return all;
}

}  // namespace service_rag
