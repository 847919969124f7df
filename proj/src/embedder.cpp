#include "service_rag/embedder.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "service_rag/embedding_cache.hpp"
#include "service_rag/errors.hpp"
#include "service_rag/text.hpp"

namespace service_rag {

std::uint64_t fnv1a64(std::string_view data) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void require_embeddable(std::span<const std::string> texts) {
    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (trim(texts[i]).empty()) throw InputError("cannot embed empty text (input #" + std::to_string(i) + ")");
    }
}

void ProviderConfig::validate() const {
    if (model_name.empty()) throw ConfigError("embedding model name is empty");
    if (batch_size == 0) throw ConfigError("embedding batch_size must be positive");
    if (max_retries < 0) throw ConfigError("max_retries must be nonnegative");
    if (kind == ProviderKind::remote) {
        if (endpoint_url.empty()) throw ConfigError("remote embedding provider needs an endpoint URL");
        parse_endpoint(endpoint_url);
        if (api_key.empty() && api_key_from_env().empty()) {
            throw ConfigError(std::string("remote embedding provider needs an API key in ") + kApiKeyEnv);
        }
    }
}

Embedding EmbeddingProvider::embed_one(const std::string& text) {
    auto out = embed(std::span<const std::string>(&text, 1));
    return std::move(out.front());
}

Embedding MockEmbedder::embed_text(std::string_view text) {
    std::vector<std::uint32_t> counts(kDim, 0);
    for (const auto& tok : tokenize(text).tokens) ++counts[fnv1a64(ascii_lower(tok.text)) % kDim];

    double sq = 0.0;
    for (auto c : counts) sq += static_cast<double>(c) * c;
    if (sq == 0.0) throw InputError("cannot embed text without tokens");
    const double norm = std::sqrt(sq);

    Embedding e;
    e.model_id = kModelId;
    e.values.resize(kDim);
    for (std::size_t i = 0; i < kDim; ++i) e.values[i] = static_cast<float>(counts[i] / norm);
    return e;
}

std::vector<Embedding> MockEmbedder::embed(std::span<const std::string> texts) {
    require_embeddable(texts);
    std::vector<Embedding> out(texts.size());
    const auto n = static_cast<std::int64_t>(texts.size());
#pragma omp parallel for schedule(dynamic) if (n > 64)
    for (std::int64_t i = 0; i < n; ++i) out[i] = embed_text(texts[i]);
    return out;
}

RemoteEmbedder::RemoteEmbedder(ProviderConfig cfg, Sleeper sleeper) : cfg_(std::move(cfg)), sleeper_(std::move(sleeper)) {
    if (cfg_.api_key.empty()) cfg_.api_key = api_key_from_env();
    cfg_.kind = ProviderKind::remote;
    cfg_.validate();
}

std::vector<Embedding> RemoteEmbedder::embed(std::span<const std::string> texts) {
    require_embeddable(texts);
    std::vector<Embedding> out;
    out.reserve(texts.size());
    for (std::size_t begin = 0; begin < texts.size(); begin += cfg_.batch_size) {
        const auto n = std::min(cfg_.batch_size, texts.size() - begin);
        auto batch = embed_batch(texts.subspan(begin, n));
        std::move(batch.begin(), batch.end(), std::back_inserter(out));
    }
    return out;
}

std::vector<Embedding> RemoteEmbedder::embed_batch(std::span<const std::string> texts) {
    nlohmann::json body = {{"model", cfg_.model_name}, {"input", nlohmann::json::array()}};
    for (const auto& t : texts) body["input"].push_back(t);

    HttpOptions opts;
    opts.api_key = cfg_.api_key;
    opts.timeout = cfg_.timeout;
    opts.max_retries = cfg_.max_retries;
    opts.sleeper = sleeper_;
    const auto reply = post_json(cfg_.endpoint_url, "/embeddings", body, opts);

    try {
        const auto& data = reply.at("data");
        if (!data.is_array() || data.size() != texts.size()) {
            throw ProviderError("embeddings reply has " + std::to_string(data.size()) + " items for " +
                                std::to_string(texts.size()) + " inputs");
        }
        std::vector<Embedding> out(texts.size());
        std::vector<bool> filled(texts.size(), false);
        for (std::size_t i = 0; i < data.size(); ++i) {
            const auto& item = data[i];
            const std::size_t slot = item.contains("index") ? item.at("index").get<std::size_t>() : i;
            if (slot >= out.size() || filled[slot]) throw ProviderError("embeddings reply has a bad index");
            filled[slot] = true;
            auto& e = out[slot];
            e.model_id = cfg_.model_name;
            e.values = item.at("embedding").get<std::vector<float>>();
            validate_embedding(e);
        }
        std::lock_guard lock(dim_mutex_);
        for (const auto& e : out) {
            if (!dim_) dim_ = e.dim();
            if (e.dim() != *dim_) {
                throw ProviderError("model '" + cfg_.model_name + "' returned dimension " + std::to_string(e.dim()) +
                                    " after " + std::to_string(*dim_));
            }
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw ProviderError(std::string("malformed embeddings reply: ") + e.what());
    } catch (const InputError& e) {
        throw ProviderError(std::string("bad embedding from provider: ") + e.what());
    }
}

std::vector<Embedding> CachingEmbedder::embed(std::span<const std::string> texts) {
    require_embeddable(texts);
    const auto model = inner_.model_id();
    std::vector<Embedding> out(texts.size());
    std::vector<std::size_t> missing;
    std::vector<std::string> missing_texts;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (auto hit = cache_.get(model, texts[i])) {
            out[i] = std::move(*hit);
            ++hits_;
        } else {
            missing.push_back(i);
            missing_texts.push_back(texts[i]);
        }
    }
    if (!missing.empty()) {
        auto fresh = inner_.embed(missing_texts);
        if (fresh.size() != missing.size()) throw ProviderError("embedding provider returned the wrong number of vectors");
        for (std::size_t j = 0; j < missing.size(); ++j) {
            cache_.put(model, missing_texts[j], fresh[j]);
            out[missing[j]] = std::move(fresh[j]);
        }
        misses_ += missing.size();
    }
    return out;
}

std::unique_ptr<EmbeddingProvider> make_embedding_provider(const ProviderConfig& cfg) {
    cfg.validate();
    if (cfg.kind == ProviderKind::mock) return std::make_unique<MockEmbedder>();
    return std::make_unique<RemoteEmbedder>(cfg);
}

std::vector<Embedding> embed_texts(std::span<const std::string> texts, const ProviderConfig& cfg) {
    return make_embedding_provider(cfg)->embed(texts);
}

}  // namespace service_rag
