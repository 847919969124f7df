#include "service_rag/http.hpp"

#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "service_rag/errors.hpp"

namespace service_rag {

Endpoint parse_endpoint(std::string_view url) {
    std::string_view rest;
    std::string scheme;
    if (url.starts_with("http://")) {
        scheme = "http://";
        rest = url.substr(7);
    } else if (url.starts_with("https://")) {
        scheme = "https://";
        rest = url.substr(8);
    } else {
        throw ConfigError("endpoint URL must start with http:// or https://: '" + std::string(url) + "'");
    }
    const auto slash = rest.find('/');
    const auto host = rest.substr(0, slash);
    if (host.empty()) throw ConfigError("endpoint URL has no host: '" + std::string(url) + "'");

    Endpoint ep;
    ep.origin = scheme + std::string(host);
    if (slash != std::string_view::npos) {
        ep.base_path = std::string(rest.substr(slash));
        while (!ep.base_path.empty() && ep.base_path.back() == '/') ep.base_path.pop_back();
    }
    return ep;
}

std::string api_key_from_env() {
    const char* v = std::getenv(kApiKeyEnv);
    return v ? std::string(v) : std::string();
}

nlohmann::json post_json(const std::string& endpoint_url, std::string_view path, const nlohmann::json& body,
                         const HttpOptions& options) {
    const auto ep = parse_endpoint(endpoint_url);
    const std::string full_path = ep.base_path + std::string(path);
    const std::string payload = body.dump();

    httplib::Headers headers;
    if (!options.api_key.empty()) headers.emplace("Authorization", "Bearer " + options.api_key);

    std::string last_error;
    for (int attempt = 0; attempt <= options.max_retries; ++attempt) {
        if (attempt > 0) {
            const auto delay = options.base_delay * (1LL << (attempt - 1));
            if (options.sleeper) {
                options.sleeper(delay);
            } else {
                std::this_thread::sleep_for(delay);
            }
        }

        httplib::Client client(ep.origin);
        client.set_connection_timeout(options.timeout);
        client.set_read_timeout(options.timeout);
        client.set_write_timeout(options.timeout);

        auto res = client.Post(full_path, headers, payload, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200);
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            throw ProviderError("POST " + full_path + " failed with HTTP " + std::to_string(res->status) + ": " +
                                res->body.substr(0, 200));
        }
        try {
            return nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::parse_error& e) {
            throw ProviderError("POST " + full_path + " returned invalid JSON: " + e.what());
        }
    }
    throw ProviderError("POST " + full_path + " failed after " + std::to_string(options.max_retries + 1) +
                        " attempt(s): " + last_error);
}

}  // namespace service_rag
