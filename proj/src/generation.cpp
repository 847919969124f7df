#include "service_rag/generation.hpp"

#include "service_rag/errors.hpp"
#include "service_rag/text.hpp"

namespace service_rag {

std::string_view to_string(ChatRole role) {
    switch (role) {
        case ChatRole::system: return "system";
        case ChatRole::user: return "user";
        case ChatRole::assistant: return "assistant";
    }
    return "user";
}

void GenerationConfig::validate() const {
    if (model_name.empty()) throw ConfigError("chat model name is empty");
    if (!(temperature >= 0.0)) throw ConfigError("temperature must be >= 0");
    if (max_output_tokens == 0) throw ConfigError("max_output_tokens must be positive");
    if (max_retries < 0) throw ConfigError("max_retries must be nonnegative");
}

namespace {

void require_messages(std::span<const ChatMessage> messages) {
    if (messages.empty()) throw InputError("complete: no messages");
    for (const auto& m : messages) {
        if (m.content.empty()) throw InputError("complete: message with empty content");
    }
}

}  // namespace

bool glob_match(std::string_view pattern, std::string_view text) {
    std::size_t p = 0, t = 0;
    std::size_t star = std::string_view::npos, mark = 0;
    while (t < text.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == text[t])) {
            ++p;
            ++t;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            mark = t;
        } else if (star != std::string_view::npos) {
            p = star + 1;
            t = ++mark;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

std::string_view last_user_message(std::span<const ChatMessage> messages) {
    for (auto it = messages.rbegin(); it != messages.rend(); ++it) {
        if (it->role == ChatRole::user) return it->content;
    }
    return {};
}

void MockChatProvider::add_script(std::string pattern, std::string response) {
    std::lock_guard lock(mutex_);
    scripts_.push_back({std::move(pattern), std::move(response)});
}

void MockChatProvider::add_responder(Responder r) {
    std::lock_guard lock(mutex_);
    responders_.push_back(std::move(r));
}

std::string MockChatProvider::complete(std::span<const ChatMessage> messages, const GenerationConfig& cfg) {
    require_messages(messages);
    cfg.validate();

    std::vector<Responder> responders;
    std::vector<Script> scripts;
    {
        std::lock_guard lock(mutex_);
        log_.emplace_back(messages.begin(), messages.end());
        responders = responders_;
        scripts = scripts_;
    }

    std::optional<std::string> reply;
    for (const auto& r : responders) {
        if ((reply = r(messages))) break;
    }
    const auto user = last_user_message(messages);
    if (!reply) {
        for (const auto& s : scripts) {
            if (glob_match(s.pattern, user)) {
                reply = s.response;
                break;
            }
        }
    }
    if (!reply) reply = std::string(user);
    if (reply->empty()) throw ProviderError("mock provider produced an empty completion");
    return *reply;
}

std::vector<std::vector<ChatMessage>> MockChatProvider::prompt_log() const {
    std::lock_guard lock(mutex_);
    return log_;
}

std::size_t MockChatProvider::call_count() const {
    std::lock_guard lock(mutex_);
    return log_.size();
}

RemoteChatProvider::RemoteChatProvider(RemoteChatConfig cfg, Sleeper sleeper)
    : cfg_(std::move(cfg)), sleeper_(std::move(sleeper)) {
    if (cfg_.api_key.empty()) cfg_.api_key = api_key_from_env();
    if (cfg_.endpoint_url.empty()) throw ConfigError("remote chat provider needs an endpoint URL");
    parse_endpoint(cfg_.endpoint_url);
    if (cfg_.api_key.empty()) throw ConfigError(std::string("remote chat provider needs an API key in ") + kApiKeyEnv);
}

std::string RemoteChatProvider::complete(std::span<const ChatMessage> messages, const GenerationConfig& cfg) {
    require_messages(messages);
    cfg.validate();

    nlohmann::json body = {
        {"model", cfg.model_name},
        {"temperature", cfg.temperature},
        {"max_tokens", cfg.max_output_tokens},
        {"messages", nlohmann::json::array()},
    };
    for (const auto& m : messages) {
        body["messages"].push_back({{"role", to_string(m.role)}, {"content", m.content}});
    }

    HttpOptions opts;
    opts.api_key = cfg_.api_key;
    opts.timeout = cfg.timeout;
    opts.max_retries = cfg.max_retries;
    opts.sleeper = sleeper_;
    const auto reply = post_json(cfg_.endpoint_url, "/chat/completions", body, opts);

    std::string content;
    try {
        const auto& msg = reply.at("choices").at(0).at("message");
        if (msg.contains("content") && msg.at("content").is_string()) content = msg.at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ProviderError(std::string("malformed chat completion reply: ") + e.what());
    }
    if (trim(content).empty()) throw ProviderError("chat provider returned an empty completion");
    return content;
}

}  // namespace service_rag
