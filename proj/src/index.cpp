#include "service_rag/index.hpp"

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <unordered_set>

#include <zlib.h>

#include "service_rag/binary_io.hpp"
#include "service_rag/errors.hpp"
#include "service_rag/fs_util.hpp"
#include "service_rag/kernels.hpp"

namespace service_rag {

namespace {

constexpr std::string_view kMagic = "SRIX";

std::uint32_t crc32_of(std::string_view bytes) {
    uLong crc = crc32(0L, Z_NULL, 0);
    // zlib takes uInt lengths; feed large buffers in pieces.
    constexpr std::size_t kStep = 1u << 30;
    for (std::size_t off = 0; off < bytes.size(); off += kStep) {
        const auto n = std::min(kStep, bytes.size() - off);
        crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data() + off), static_cast<uInt>(n));
    }
    return static_cast<std::uint32_t>(crc);
}

}  // namespace

VectorIndex::VectorIndex(std::string model_id, std::size_t dim) : model_id_(std::move(model_id)), dim_(dim) {
    if (dim_ == 0) throw InputError("index dimension must be positive");
}

void VectorIndex::add(std::span<const Chunk> chunks, std::span<const Embedding> embeddings) {
    if (chunks.size() != embeddings.size()) {
        throw InputError("add: " + std::to_string(chunks.size()) + " chunks but " + std::to_string(embeddings.size()) +
                         " embeddings");
    }
    // Validate everything first so a failed add leaves the index untouched.
    std::vector<long double> norms(embeddings.size());
    for (std::size_t i = 0; i < embeddings.size(); ++i) {
        const auto& e = embeddings[i];
        if (e.dim() != dim_) {
            throw DimensionMismatchError("add: embedding dimension " + std::to_string(e.dim()) +
                                         " does not match index dimension " + std::to_string(dim_));
        }
        if (e.model_id != model_id_) {
            throw ModelMismatchError("add: embedding model '" + e.model_id + "' does not match index model '" +
                                     model_id_ + "'");
        }
        validate_embedding(e);
        norms[i] = kernels::squared_norm(e.view());
        if (norms[i] == 0.0L) throw ZeroNormError("add: zero embedding for chunk " + chunks[i].incident_id);
    }

    chunks_.insert(chunks_.end(), chunks.begin(), chunks.end());
    rows_.reserve(rows_.size() + embeddings.size() * dim_);
    for (const auto& e : embeddings) rows_.insert(rows_.end(), e.values.begin(), e.values.end());
    sq_norms_.insert(sq_norms_.end(), norms.begin(), norms.end());
}

std::span<const float> VectorIndex::vector(std::size_t entry_id) const {
    if (entry_id >= size()) throw std::out_of_range("entry id out of range");
    return std::span<const float>(rows_).subspan(entry_id * dim_, dim_);
}

void VectorIndex::check_query(const Embedding& query) const {
    if (query.dim() != dim_) {
        throw DimensionMismatchError("query dimension " + std::to_string(query.dim()) +
                                     " does not match index dimension " + std::to_string(dim_));
    }
    if (!query.model_id.empty() && query.model_id != model_id_) {
        throw ModelMismatchError("query model '" + query.model_id + "' does not match index model '" + model_id_ +
                                 "'");
    }
    if (kernels::squared_norm(query.view()) == 0.0L) throw ZeroNormError("query embedding is all zeros");
}

std::vector<double> VectorIndex::similarities(const Embedding& query) const {
    check_query(query);
    std::vector<double> sims(size());
    kernels::cosine_scan(rows_, dim_, sq_norms_, query.view(), sims);
    return sims;
}

std::vector<RetrievalHit> VectorIndex::search(const Embedding& query, std::size_t k) const {
    if (k == 0) throw InputError("search: k must be at least 1");
    if (empty()) return {};
    const auto sims = similarities(query);

    std::vector<std::size_t> order(size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto top = std::min(k, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top), order.end(),
                      [&](std::size_t a, std::size_t b) { return sims[a] > sims[b] || (sims[a] == sims[b] && a < b); });

    std::vector<RetrievalHit> hits;
    hits.reserve(top);
    for (std::size_t r = 0; r < top; ++r) {
        const auto id = order[r];
        hits.push_back({chunks_[id], sims[id], r + 1, id});
    }
    return hits;
}

std::map<std::string, double> VectorIndex::nearest_distance_per_incident(const Embedding& query) const {
    std::map<std::string, double> out;
    if (empty()) return out;
    const auto sims = similarities(query);
    for (std::size_t i = 0; i < sims.size(); ++i) {
        const double d = similarity_to_distance(sims[i]);
        auto [it, inserted] = out.try_emplace(chunks_[i].incident_id, d);
        if (!inserted) it->second = std::min(it->second, d);
    }
    return out;
}

std::vector<std::string> VectorIndex::incident_ids() const {
    std::vector<std::string> ids;
    std::unordered_set<std::string> seen;
    for (const auto& c : chunks_) {
        if (seen.insert(c.incident_id).second) ids.push_back(c.incident_id);
    }
    return ids;
}

std::string VectorIndex::serialize() const {
    ByteWriter w;
    w.bytes(kMagic);
    w.u16(kFormatVersion);
    w.str(model_id_);
    w.u32(static_cast<std::uint32_t>(dim_));
    w.u64(size());
    for (std::size_t i = 0; i < size(); ++i) {
        const auto& c = chunks_[i];
        w.str(c.incident_id);
        w.u64(c.seq);
        w.u64(c.token_start);
        w.u64(c.token_end);
        w.str(c.text);
        for (float v : vector(i)) w.f32(v);
    }
    w.u32(crc32_of(w.data()));
    return w.data();
}

VectorIndex VectorIndex::deserialize(std::string_view bytes) {
    ByteReader r(bytes);
    if (bytes.size() < kMagic.size()) throw CorruptIndexError("index file is truncated");
    if (r.take(kMagic.size()) != kMagic) throw CorruptIndexError("not an index file (bad magic)");
    const auto version = r.u16();
    if (version != kFormatVersion) {
        throw IndexVersionError("unsupported index format version " + std::to_string(version) + " (expected " +
                                std::to_string(kFormatVersion) + ")");
    }
    auto model_id = r.str();
    const auto dim = r.u32();
    if (dim == 0) throw CorruptIndexError("index dimension is zero");
    const auto count = r.u64();
    // Each entry needs at least its fixed-size fields; reject absurd counts early.
    const std::uint64_t min_entry = 4 + 8 * 3 + 4 + std::uint64_t{dim} * 4;
    if (count > r.remaining() / min_entry) throw CorruptIndexError("index file is truncated");

    std::vector<Chunk> chunks(count);
    std::vector<Embedding> embeddings(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        auto& c = chunks[i];
        c.incident_id = r.str();
        c.seq = r.u64();
        c.token_start = r.u64();
        c.token_end = r.u64();
        c.text = r.str();
        auto& e = embeddings[i];
        e.model_id = model_id;
        e.values.resize(dim);
        for (auto& v : e.values) v = r.f32();
    }
    const auto payload_size = bytes.size() - r.remaining();
    const auto stored_crc = r.u32();
    if (!r.at_end()) throw CorruptIndexError("index file has trailing bytes");
    if (stored_crc != crc32_of(bytes.substr(0, payload_size))) throw CorruptIndexError("index checksum mismatch");

    VectorIndex index(std::move(model_id), dim);
    try {
        index.add(chunks, embeddings);
    } catch (const InputError& e) {
        throw CorruptIndexError(std::string("index content is invalid: ") + e.what());
    }
    return index;
}

void VectorIndex::save(const std::filesystem::path& path) const { write_file_atomic(path, serialize()); }

VectorIndex VectorIndex::load(const std::filesystem::path& path, std::optional<std::string_view> expected_model_id) {
    if (!std::filesystem::exists(path)) throw InputError("index file not found: " + path.string());
    VectorIndex index = [&] {
        try {
            return deserialize(read_file_bytes(path));
        } catch (const CorruptIndexError& e) {
            throw CorruptIndexError(path.string() + ": " + e.what());
        }
    }();
    if (expected_model_id && index.model_id() != *expected_model_id) {
        throw ModelMismatchError(path.string() + ": index was built with model '" + index.model_id() +
                                 "', expected '" + std::string(*expected_model_id) + "'");
    }
    return index;
}

}  // namespace service_rag
