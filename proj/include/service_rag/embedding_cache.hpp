#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "service_rag/vectors.hpp"

namespace service_rag {

/// Content-addressed embedding store: one file per (model_id, text) at
/// `<root>/<model_id>/<sha256(text)>.vec`.
///
/// File layout (little-endian): magic "SRV1", u32 dim, dim x f32.
/// Writes go through a temp file and a rename, so concurrent writers of the
/// same key leave one complete entry behind.
class EmbeddingCache {
public:
    explicit EmbeddingCache(std::filesystem::path root);

    /// Corrupt or unreadable entries are reported as a miss (with a warning).
    std::optional<Embedding> get(std::string_view model_id, std::string_view text) const;
    void put(std::string_view model_id, std::string_view text, const Embedding& embedding) const;

    std::filesystem::path entry_path(std::string_view model_id, std::string_view text) const;
    const std::filesystem::path& root() const noexcept { return root_; }

private:
    std::filesystem::path root_;
};

/// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

}  // namespace service_rag
