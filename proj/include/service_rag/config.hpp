#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include "service_rag/chunker.hpp"
#include "service_rag/embedder.hpp"
#include "service_rag/generation.hpp"

namespace service_rag {

inline constexpr const char* kDefaultBaseUrl = "https://api.openai.com/v1";

/// Everything a CLI run needs. Precedence, lowest first: built-in defaults,
/// the TOML file, SERVICE_RAG_BASE_URL, command-line flags.
struct AppConfig {
    ProviderConfig embedding;

    ProviderKind chat_kind = ProviderKind::remote;
    std::string chat_endpoint_url = kDefaultBaseUrl;
    GenerationConfig chat;

    ChunkerConfig chunker;
    std::size_t k = 2;
    std::filesystem::path cache_dir;  // empty disables the embedding cache
    std::filesystem::path out_dir = "out";
    double reading_wpm = 200.0;
    std::size_t parallelism = 4;

    AppConfig();

    /// Throws ConfigError on the first invalid field. Does not check API keys.
    void validate() const;
};

/// Parses TOML text. Unknown keys and wrongly typed values throw ConfigError
/// naming the offending key.
///
///   provider = "remote" | "mock"        # both providers
///   base_url = "https://..."            # both providers
///   k = 2
///   cache_dir = "cache"
///   out_dir = "out"
///   reading_wpm = 200.0
///   parallelism = 4
///   [embedding]  provider, base_url, model, batch_size, timeout_s, max_retries
///   [chat]       provider, base_url, model, temperature, max_output_tokens,
///                timeout_s, max_retries
///   [chunker]    chunk_size_tokens, overlap_tokens
AppConfig parse_app_config(std::string_view toml_text, std::string_view source_name = "config");
AppConfig load_app_config(const std::filesystem::path& path);

/// Applies SERVICE_RAG_BASE_URL, if set, to both providers.
void apply_env_overrides(AppConfig& cfg);

ProviderKind parse_provider_kind(std::string_view s);

std::unique_ptr<ChatProvider> make_chat_provider(const AppConfig& cfg);

}  // namespace service_rag
