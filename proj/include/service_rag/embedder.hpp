#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "service_rag/http.hpp"
#include "service_rag/vectors.hpp"

namespace service_rag {

class EmbeddingCache;

enum class ProviderKind { mock, remote };

struct ProviderConfig {
    ProviderKind kind = ProviderKind::mock;
    std::string endpoint_url;  // remote only
    std::string model_name = "text-embedding-3-small";
    std::size_t batch_size = 64;
    std::chrono::milliseconds timeout{30000};
    int max_retries = 3;
    /// Remote bearer token. Empty means "read SERVICE_RAG_API_KEY".
    std::string api_key;

    /// Throws ConfigError; remote needs an endpoint and a key (after the
    /// environment fallback).
    void validate() const;
};

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;

    virtual std::string model_id() const = 0;

    /// One embedding per input, in order. Empty or whitespace-only texts throw
    /// InputError; backend failures throw ProviderError.
    virtual std::vector<Embedding> embed(std::span<const std::string> texts) = 0;

    Embedding embed_one(const std::string& text);
};

/// Offline embedder: bag of tokens hashed into 256 buckets, L2-normalised.
///
/// Tokens come from tokenize() and are ASCII-lowercased; each bumps bucket
/// fnv1a64(token) % 256 by one. Identical texts give identical vectors on
/// every platform.
class MockEmbedder final : public EmbeddingProvider {
public:
    static constexpr std::size_t kDim = 256;
    static constexpr const char* kModelId = "mock-bow-256";

    std::string model_id() const override { return kModelId; }
    std::vector<Embedding> embed(std::span<const std::string> texts) override;

    static Embedding embed_text(std::string_view text);
};

/// OpenAI-compatible embeddings client: POST <endpoint>/embeddings with
/// {"model", "input": [...]}, reading data[i].embedding.
class RemoteEmbedder final : public EmbeddingProvider {
public:
    explicit RemoteEmbedder(ProviderConfig cfg, Sleeper sleeper = {});

    std::string model_id() const override { return cfg_.model_name; }
    std::vector<Embedding> embed(std::span<const std::string> texts) override;

private:
    std::vector<Embedding> embed_batch(std::span<const std::string> texts);

    ProviderConfig cfg_;
    Sleeper sleeper_;
    std::mutex dim_mutex_;
    std::optional<std::size_t> dim_;
};

/// Serves repeated texts from an EmbeddingCache and forwards misses.
class CachingEmbedder final : public EmbeddingProvider {
public:
    CachingEmbedder(EmbeddingProvider& inner, const EmbeddingCache& cache) : inner_(inner), cache_(cache) {}

    std::string model_id() const override { return inner_.model_id(); }
    std::vector<Embedding> embed(std::span<const std::string> texts) override;

    std::size_t hits() const noexcept { return hits_; }
    std::size_t misses() const noexcept { return misses_; }

private:
    EmbeddingProvider& inner_;
    const EmbeddingCache& cache_;
    std::size_t hits_ = 0;
    std::size_t misses_ = 0;
};

std::unique_ptr<EmbeddingProvider> make_embedding_provider(const ProviderConfig& cfg);

/// Convenience wrapper: builds a provider from cfg and embeds `texts`.
std::vector<Embedding> embed_texts(std::span<const std::string> texts, const ProviderConfig& cfg);

/// FNV-1a, 64-bit.
std::uint64_t fnv1a64(std::string_view data) noexcept;

/// Throws InputError if any text is empty or whitespace-only.
void require_embeddable(std::span<const std::string> texts);

}  // namespace service_rag
