#include "service_rag/config.hpp"

#include <cstdlib>
#include <sstream>

#include <toml.hpp>

#include "service_rag/errors.hpp"
#include "service_rag/fs_util.hpp"

namespace service_rag {

AppConfig::AppConfig() {
    embedding.kind = ProviderKind::remote;
    embedding.endpoint_url = kDefaultBaseUrl;
}

void AppConfig::validate() const {
    if (embedding.model_name.empty()) throw ConfigError("embedding.model is empty");
    if (embedding.batch_size == 0) throw ConfigError("embedding.batch_size must be positive");
    if (embedding.max_retries < 0) throw ConfigError("embedding.max_retries must be nonnegative");
    if (embedding.kind == ProviderKind::remote) parse_endpoint(embedding.endpoint_url);
    if (chat_kind == ProviderKind::remote) parse_endpoint(chat_endpoint_url);
    chat.validate();
    chunker.validate();
    if (k == 0) throw ConfigError("k must be at least 1");
    if (!(reading_wpm > 0.0)) throw ConfigError("reading_wpm must be positive");
    if (parallelism == 0) throw ConfigError("parallelism must be at least 1");
}

ProviderKind parse_provider_kind(std::string_view s) {
    if (s == "mock") return ProviderKind::mock;
    if (s == "remote") return ProviderKind::remote;
    throw ConfigError("unknown provider '" + std::string(s) + "' (expected 'remote' or 'mock')");
}

namespace {

std::string join_key(std::string_view section, std::string_view key) {
    return section.empty() ? std::string(key) : std::string(section) + "." + std::string(key);
}

std::string get_string(const toml::node& node, const std::string& key) {
    if (auto v = node.value_exact<std::string>()) return *v;
    throw ConfigError("config key '" + key + "' must be a string");
}

std::int64_t get_int(const toml::node& node, const std::string& key, std::int64_t min) {
    auto v = node.value_exact<std::int64_t>();
    if (!v) throw ConfigError("config key '" + key + "' must be an integer");
    if (*v < min) throw ConfigError("config key '" + key + "' must be >= " + std::to_string(min));
    return *v;
}

double get_number(const toml::node& node, const std::string& key) {
    if (auto v = node.value_exact<double>()) return *v;
    if (auto v = node.value_exact<std::int64_t>()) return static_cast<double>(*v);
    throw ConfigError("config key '" + key + "' must be a number");
}

std::chrono::milliseconds get_seconds(const toml::node& node, const std::string& key) {
    const double s = get_number(node, key);
    if (!(s > 0.0)) throw ConfigError("config key '" + key + "' must be positive");
    return std::chrono::milliseconds(static_cast<std::int64_t>(s * 1000.0));
}

const toml::table& as_section(const toml::node& node, const std::string& key) {
    if (const auto* t = node.as_table()) return *t;
    throw ConfigError("config key '" + key + "' must be a table");
}

}  // namespace

AppConfig parse_app_config(std::string_view toml_text, std::string_view source_name) {
    toml::table root;
    try {
        root = toml::parse(toml_text, source_name);
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << "invalid TOML in " << source_name << ": " << e.description() << " (line " << e.source().begin.line
            << ")";
        throw ConfigError(msg.str());
    }

    AppConfig cfg;
    // Section-level provider/base_url must win over the top-level ones
    // regardless of key order, so apply top-level values first.
    if (const auto* n = root.get("provider")) {
        const auto kind = parse_provider_kind(get_string(*n, "provider"));
        cfg.embedding.kind = kind;
        cfg.chat_kind = kind;
    }
    if (const auto* n = root.get("base_url")) {
        const auto url = get_string(*n, "base_url");
        cfg.embedding.endpoint_url = url;
        cfg.chat_endpoint_url = url;
    }

    for (auto&& [k, node] : root) {
        const std::string key(k.str());
        if (key == "provider" || key == "base_url") continue;
        if (key == "k") {
            cfg.k = static_cast<std::size_t>(get_int(node, key, 1));
        } else if (key == "cache_dir") {
            cfg.cache_dir = get_string(node, key);
        } else if (key == "out_dir") {
            cfg.out_dir = get_string(node, key);
        } else if (key == "reading_wpm") {
            cfg.reading_wpm = get_number(node, key);
        } else if (key == "parallelism") {
            cfg.parallelism = static_cast<std::size_t>(get_int(node, key, 1));
        } else if (key == "embedding") {
            for (auto&& [sk, sn] : as_section(node, key)) {
                const auto full = join_key(key, sk.str());
                const std::string_view s = sk.str();
                if (s == "provider") cfg.embedding.kind = parse_provider_kind(get_string(sn, full));
                else if (s == "base_url") cfg.embedding.endpoint_url = get_string(sn, full);
                else if (s == "model") cfg.embedding.model_name = get_string(sn, full);
                else if (s == "batch_size") cfg.embedding.batch_size = static_cast<std::size_t>(get_int(sn, full, 1));
                else if (s == "timeout_s") cfg.embedding.timeout = get_seconds(sn, full);
                else if (s == "max_retries") cfg.embedding.max_retries = static_cast<int>(get_int(sn, full, 0));
                else throw ConfigError("unknown config key '" + full + "'");
            }
        } else if (key == "chat") {
            for (auto&& [sk, sn] : as_section(node, key)) {
                const auto full = join_key(key, sk.str());
                const std::string_view s = sk.str();
                if (s == "provider") cfg.chat_kind = parse_provider_kind(get_string(sn, full));
                else if (s == "base_url") cfg.chat_endpoint_url = get_string(sn, full);
                else if (s == "model") cfg.chat.model_name = get_string(sn, full);
                else if (s == "temperature") cfg.chat.temperature = get_number(sn, full);
                else if (s == "max_output_tokens") cfg.chat.max_output_tokens = static_cast<std::size_t>(get_int(sn, full, 1));
                else if (s == "timeout_s") cfg.chat.timeout = get_seconds(sn, full);
                else if (s == "max_retries") cfg.chat.max_retries = static_cast<int>(get_int(sn, full, 0));
                else throw ConfigError("unknown config key '" + full + "'");
            }
        } else if (key == "chunker") {
            for (auto&& [sk, sn] : as_section(node, key)) {
                const auto full = join_key(key, sk.str());
                const std::string_view s = sk.str();
                if (s == "chunk_size_tokens") cfg.chunker.chunk_size_tokens = static_cast<std::size_t>(get_int(sn, full, 1));
                else if (s == "overlap_tokens") cfg.chunker.overlap_tokens = static_cast<std::size_t>(get_int(sn, full, 0));
                else throw ConfigError("unknown config key '" + full + "'");
            }
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

AppConfig load_app_config(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw ConfigError("config file not found: " + path.string());
    return parse_app_config(read_file_bytes(path), path.string());
}

void apply_env_overrides(AppConfig& cfg) {
    if (const char* url = std::getenv(kBaseUrlEnv); url && *url) {
        cfg.embedding.endpoint_url = url;
        cfg.chat_endpoint_url = url;
    }
}

std::unique_ptr<ChatProvider> make_chat_provider(const AppConfig& cfg) {
    if (cfg.chat_kind == ProviderKind::mock) return std::make_unique<MockChatProvider>();
    return std::make_unique<RemoteChatProvider>(RemoteChatConfig{cfg.chat_endpoint_url, {}});
}

}  // namespace service_rag
