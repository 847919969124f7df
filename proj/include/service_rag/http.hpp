#pragma once

#include <chrono>
#include <functional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace service_rag {

/// Environment variable holding the bearer token for remote providers.
inline constexpr const char* kApiKeyEnv = "SERVICE_RAG_API_KEY";
/// Optional environment override for the provider base URL.
inline constexpr const char* kBaseUrlEnv = "SERVICE_RAG_BASE_URL";

/// "https://host:port/v1" split into the part httplib connects to and the
/// path prefix prepended to every request.
struct Endpoint {
    std::string origin;     // scheme://host[:port]
    std::string base_path;  // "" or "/v1", never a trailing slash
};

/// Throws ConfigError on anything that is not http(s)://host[:port][/path].
Endpoint parse_endpoint(std::string_view url);

using Sleeper = std::function<void(std::chrono::milliseconds)>;

struct HttpOptions {
    std::string api_key;
    std::chrono::milliseconds timeout{30000};
    int max_retries = 3;
    /// Backoff before retry i (0-based) is base_delay * 2^i.
    std::chrono::milliseconds base_delay{500};
    /// Defaults to std::this_thread::sleep_for; tests substitute a recorder.
    Sleeper sleeper;
};

/// POSTs a JSON body to `<endpoint_url><path>` and parses the JSON reply.
///
/// Transport failures and HTTP 5xx are retried with exponential backoff;
/// other non-2xx statuses fail immediately. Every failure surfaces as
/// ProviderError carrying the last cause.
nlohmann::json post_json(const std::string& endpoint_url, std::string_view path, const nlohmann::json& body,
                         const HttpOptions& options);

/// Reads kApiKeyEnv; empty string when unset.
std::string api_key_from_env();

}  // namespace service_rag
