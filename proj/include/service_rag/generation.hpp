#pragma once

#include <chrono>
#include <functional>
#include <initializer_list>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "service_rag/http.hpp"

namespace service_rag {

enum class ChatRole { system, user, assistant };

std::string_view to_string(ChatRole role);

struct ChatMessage {
    ChatRole role = ChatRole::user;
    std::string content;

    bool operator==(const ChatMessage&) const = default;
};

struct GenerationConfig {
    std::string model_name = "gpt-3.5-turbo-0125";
    double temperature = 0.0;
    std::size_t max_output_tokens = 1024;
    std::chrono::milliseconds timeout{60000};
    int max_retries = 3;

    void validate() const;
};

class ChatProvider {
public:
    virtual ~ChatProvider() = default;

    /// Returns the assistant text. Throws InputError for an empty message list
    /// or empty message content, ProviderError for backend failures and empty
    /// completions.
    virtual std::string complete(std::span<const ChatMessage> messages, const GenerationConfig& cfg) = 0;
};

/// Scripted offline provider.
///
/// A call is answered by the first responder that returns a value, then by
/// the first script whose glob pattern (`*` and `?`) matches the last user
/// message, and otherwise echoes that user message. Every call is logged.
class MockChatProvider final : public ChatProvider {
public:
    using Responder = std::function<std::optional<std::string>(std::span<const ChatMessage>)>;

    struct Script {
        std::string pattern;
        std::string response;
    };

    MockChatProvider() = default;
    explicit MockChatProvider(std::vector<Script> scripts) : scripts_(std::move(scripts)) {}
    MockChatProvider(std::initializer_list<Script> scripts) : scripts_(scripts) {}

    void add_script(std::string pattern, std::string response);
    void add_responder(Responder r);

    std::string complete(std::span<const ChatMessage> messages, const GenerationConfig& cfg) override;

    /// Snapshot of the received prompts, one entry per complete() call.
    std::vector<std::vector<ChatMessage>> prompt_log() const;
    std::size_t call_count() const;

private:
    mutable std::mutex mutex_;
    std::vector<Script> scripts_;
    std::vector<Responder> responders_;
    std::vector<std::vector<ChatMessage>> log_;
};

struct RemoteChatConfig {
    std::string endpoint_url;
    /// Empty means "read SERVICE_RAG_API_KEY".
    std::string api_key;
};

/// OpenAI-compatible chat client: POST <endpoint>/chat/completions with
/// {"model", "temperature", "max_tokens", "messages"}, reading
/// choices[0].message.content.
class RemoteChatProvider final : public ChatProvider {
public:
    explicit RemoteChatProvider(RemoteChatConfig cfg, Sleeper sleeper = {});

    std::string complete(std::span<const ChatMessage> messages, const GenerationConfig& cfg) override;

private:
    RemoteChatConfig cfg_;
    Sleeper sleeper_;
};

/// Shell-style glob: `*` any run, `?` one byte. Matches the whole string.
bool glob_match(std::string_view pattern, std::string_view text);

/// Last message with the user role, or empty.
std::string_view last_user_message(std::span<const ChatMessage> messages);

}  // namespace service_rag
