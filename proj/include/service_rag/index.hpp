#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "service_rag/chunker.hpp"
#include "service_rag/vectors.hpp"

namespace service_rag {

struct RetrievalHit {
    Chunk chunk;
    double similarity = 0.0;
    std::size_t rank = 0;  // 1-based
    std::size_t entry_id = 0;
};

/// Exact brute-force cosine index over (chunk, embedding) entries.
///
/// Entries get ids in insertion order. Ranking is by similarity descending,
/// ties broken by the smaller entry id. Mutation (add) needs exclusive access;
/// all const members are safe to call concurrently.
class VectorIndex {
public:
    static constexpr std::uint16_t kFormatVersion = 1;

    VectorIndex(std::string model_id, std::size_t dim);

    /// Appends entries in order. Throws DimensionMismatchError,
    /// ModelMismatchError, ZeroNormError or InputError (length mismatch).
    void add(std::span<const Chunk> chunks, std::span<const Embedding> embeddings);

    /// Top-min(k, size) hits. Empty index gives an empty result.
    std::vector<RetrievalHit> search(const Embedding& query, std::size_t k) const;

    /// Similarity of the query to every entry, in entry order.
    std::vector<double> similarities(const Embedding& query) const;

    /// For every incident in the index, the smallest cosine distance between
    /// the query and any of that incident's chunks.
    std::map<std::string, double> nearest_distance_per_incident(const Embedding& query) const;

    /// Distinct incident ids in order of first insertion.
    std::vector<std::string> incident_ids() const;

    std::size_t size() const noexcept { return chunks_.size(); }
    bool empty() const noexcept { return chunks_.empty(); }
    std::size_t dim() const noexcept { return dim_; }
    const std::string& model_id() const noexcept { return model_id_; }
    const Chunk& chunk(std::size_t entry_id) const { return chunks_.at(entry_id); }
    std::span<const float> vector(std::size_t entry_id) const;

    /// Binary layout, all little-endian:
    ///   "SRIX", u16 version, str model_id, u32 dim, u64 count,
    ///   count x { str incident_id, u64 seq, u64 token_start, u64 token_end,
    ///             str text, dim x f32 },
    ///   u32 CRC-32 of every preceding byte.
    /// str = u32 byte length + UTF-8 bytes.
    std::string serialize() const;
    static VectorIndex deserialize(std::string_view bytes);

    /// Atomic write (temp file + rename).
    void save(const std::filesystem::path& path) const;

    /// Throws InputError if missing, CorruptIndexError (truncated, bad magic,
    /// checksum), IndexVersionError, or ModelMismatchError when
    /// `expected_model_id` is given and differs.
    static VectorIndex load(const std::filesystem::path& path,
                            std::optional<std::string_view> expected_model_id = std::nullopt);

private:
    void check_query(const Embedding& query) const;

    std::string model_id_;
    std::size_t dim_;
    std::vector<Chunk> chunks_;
    std::vector<float> rows_;  // row-major, size() x dim_
    std::vector<long double> sq_norms_;
};

}  // namespace service_rag
