#pragma once

#include "ragaudit/http.hpp"

#include <chrono>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ragaudit {

struct ChatRequest {
    std::string model_name;
    double temperature = 0.7;
    int max_tokens = 5; // binary audit mode; open analysis may go up to 4095
    std::string prompt_text;
};

struct ChatResponse {
    std::string text; // provider text verbatim, never trimmed before storage
    double latency_ms = 0.0;
    std::string provider_id;
};

enum class Decision { Yes, No, NonCompliant };

const char* decision_name(Decision decision);
Decision decision_from_name(const std::string& name);

struct Verdict {
    Decision decision = Decision::NonCompliant;
    std::string raw_text;
    // True when the response matched the exact-form rule; the leading-word
    // rescue ("YES, because ...") yields a usable decision with strict=false.
    bool strict = false;
};

// Total function: strips whitespace and trailing punctuation (. , !), then
// case-insensitively accepts exactly YES/NO; otherwise falls back to the
// first whitespace-delimited word unless strict_only is set.
Verdict parse_verdict(std::string_view text, bool strict_only = false);

// Identifies one trial's seeded response stream to the mock provider;
// execution order never influences mock output for stream-keyed scripts.
struct CallContext {
    std::string stream_id;      // audited contract id
    std::uint64_t call_index = 0; // trial index
};

class ChatClient {
public:
    virtual ~ChatClient() = default;
    virtual ChatResponse complete(const ChatRequest& request, const CallContext& context) = 0;
    virtual const std::string& provider_id() const = 0;
};

struct ChatEndpointConfig {
    std::string endpoint_url; // falls back to RAGAUDIT_BASE_URL + /v1/chat/completions
    int timeout_s = 120;
    int max_retries = 3;
    int retry_initial_delay_ms = 1000;
    int max_concurrent = 4;       // in-flight request cap
    int requests_per_minute = 0;  // 0 = unthrottled
};

// Remote chat transport. Wire protocol: POST {"model", "temperature",
// "max_tokens", "messages":[{"role":"user","content":...}]}; the response
// text is the first choice's message content. A context-length rejection
// surfaces as ContextOverflow so the caller can re-truncate and retry.
class HttpChatClient final : public ChatClient {
public:
    HttpChatClient(ChatEndpointConfig config, HttpTransport& transport);

    ChatResponse complete(const ChatRequest& request, const CallContext& context) override;
    const std::string& provider_id() const override { return provider_id_; }

private:
    void throttle();

    ChatEndpointConfig config_;
    HttpTransport& transport_;
    std::string provider_id_ = "http-chat";
    std::mutex throttle_mutex_;
    int in_flight_ = 0;
    std::chrono::steady_clock::time_point last_request_{};
};

// Scripted verdict model for the mock provider.
struct MockScript {
    enum class Kind { Sequence, PerStream, Bernoulli };

    Kind kind = Kind::Sequence;
    // Sequence: responses consumed in call order (single-threaded use).
    std::vector<std::string> sequence;
    // PerStream: responses indexed by (stream_id, call_index).
    std::map<std::string, std::vector<std::string>> per_stream;
    // Bernoulli: P(YES) per stream, seeded per (seed, stream_id, call_index).
    double default_rate = 0.5;
    std::map<std::string, double> rates;

    static MockScript from_sequence(std::vector<std::string> responses);
    static MockScript from_streams(std::map<std::string, std::vector<std::string>> responses);
    static MockScript from_rates(double default_rate, std::map<std::string, double> rates = {});
    // Builds a per-stream script answering YES for exactly `successes` of
    // `trials` calls per stream (replaying fixed per-contract counts).
    static MockScript from_exact_counts(
        const std::map<std::string, std::pair<std::size_t, std::size_t>>& successes_of_trials);
};

// Deterministic test double: for stream-keyed scripts the response is a pure
// function of (script, seed, stream_id, call_index); the plain sequence form
// serializes a call counter. Throws ScriptExhausted on sequence overrun.
class MockChatClient final : public ChatClient {
public:
    explicit MockChatClient(MockScript script, std::uint64_t seed = 0);

    ChatResponse complete(const ChatRequest& request, const CallContext& context) override;
    const std::string& provider_id() const override { return provider_id_; }

private:
    MockScript script_;
    std::uint64_t seed_;
    std::string provider_id_ = "mock";
    std::mutex sequence_mutex_;
    std::size_t sequence_pos_ = 0;
};

} // namespace ragaudit
