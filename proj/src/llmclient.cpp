#include "ragaudit/llmclient.hpp"

#include "ragaudit/errors.hpp"
#include "ragaudit/util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <condition_variable>
#include <thread>

using json = nlohmann::json;

namespace ragaudit {

const char* decision_name(Decision decision) {
    switch (decision) {
        case Decision::Yes: return "YES";
        case Decision::No: return "NO";
        case Decision::NonCompliant: return "NON_COMPLIANT";
    }
    return "NON_COMPLIANT";
}

Decision decision_from_name(const std::string& name) {
    if (name == "YES") return Decision::Yes;
    if (name == "NO") return Decision::No;
    if (name == "NON_COMPLIANT") return Decision::NonCompliant;
    raise(Errc::IoError, "unknown decision '" + name + "'");
}

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_trailing_punct(char c) {
    return c == '.' || c == ',' || c == '!';
}

std::string_view strip(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && (is_space(s.back()) || is_trailing_punct(s.back()))) s.remove_suffix(1);
    return s;
}

std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

// Uniform draw in [0,1) that is a pure function of (seed, stream, index),
// stable across platforms (no std distribution involved).
double seeded_uniform(std::uint64_t seed, const std::string& stream, std::uint64_t index) {
    std::uint64_t h = util::fnv1a64(stream, util::fnv1a64_mix(seed, util::kFnvOffset));
    h = util::fnv1a64_mix(index, h);
    // splitmix64 finalizer to spread FNV's low-entropy high bits
    h += 0x9e3779b97f4a7c15ull;
    h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ull;
    h = (h ^ (h >> 27)) * 0x94d049bb133111ebull;
    h ^= h >> 31;
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

} // namespace

Verdict parse_verdict(std::string_view text, bool strict_only) {
    Verdict verdict;
    verdict.raw_text = std::string(text);

    const std::string_view stripped = strip(text);
    const std::string normalized = upper(stripped);
    if (normalized == "YES") {
        return {Decision::Yes, verdict.raw_text, true};
    }
    if (normalized == "NO") {
        return {Decision::No, verdict.raw_text, true};
    }
    if (!strict_only) {
        const std::size_t end = [&] {
            for (std::size_t i = 0; i < normalized.size(); ++i) {
                if (is_space(normalized[i])) return i;
            }
            return normalized.size();
        }();
        std::string_view word(normalized.data(), end);
        while (!word.empty() && is_trailing_punct(word.back())) word.remove_suffix(1);
        if (word == "YES") {
            return {Decision::Yes, verdict.raw_text, false};
        }
        if (word == "NO") {
            return {Decision::No, verdict.raw_text, false};
        }
    }
    return {Decision::NonCompliant, verdict.raw_text, false};
}

HttpChatClient::HttpChatClient(ChatEndpointConfig config, HttpTransport& transport)
    : config_(std::move(config)), transport_(transport) {
    if (config_.endpoint_url.empty()) {
        config_.endpoint_url = base_url_from_env();
        if (!config_.endpoint_url.empty() && config_.endpoint_url.find("/v1/") == std::string::npos) {
            config_.endpoint_url += "/v1/chat/completions";
        }
    }
}

void HttpChatClient::throttle() {
    std::unique_lock lock(throttle_mutex_);
    // Concurrency cap: simple spin-wait on the lock; remote calls dominate.
    while (config_.max_concurrent > 0 && in_flight_ >= config_.max_concurrent) {
        lock.unlock();
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
        lock.lock();
    }
    if (config_.requests_per_minute > 0) {
        const auto min_gap = std::chrono::milliseconds(60000 / config_.requests_per_minute);
        const auto now = std::chrono::steady_clock::now();
        if (last_request_.time_since_epoch().count() != 0 && now - last_request_ < min_gap) {
            const auto wait = min_gap - (now - last_request_);
            lock.unlock();
            std::this_thread::sleep_for(wait);
            lock.lock();
        }
    }
    last_request_ = std::chrono::steady_clock::now();
    ++in_flight_;
}

ChatResponse HttpChatClient::complete(const ChatRequest& request, const CallContext&) {
    if (request.prompt_text.empty()) {
        raise(Errc::EmptyText, "empty prompt");
    }
    if (config_.endpoint_url.empty()) {
        raise(Errc::ProviderUnavailable, "no chat endpoint configured (set RAGAUDIT_BASE_URL)");
    }
    const json body = {{"model", request.model_name},
                       {"temperature", request.temperature},
                       {"max_tokens", request.max_tokens},
                       {"messages", json::array({json{{"role", "user"},
                                                      {"content", request.prompt_text}}})}};
    HttpHeaders headers;
    if (const std::string key = api_key_from_env(); !key.empty()) {
        headers.emplace_back("Authorization", "Bearer " + key);
    }

    throttle();
    const auto started = std::chrono::steady_clock::now();
    HttpResponse response;
    try {
        int delay_ms = config_.retry_initial_delay_ms;
        for (int attempt = 0;; ++attempt) {
            response = transport_.post_json(config_.endpoint_url, body.dump(), headers,
                                            config_.timeout_s);
            if (response.status == 401 || response.status == 403) {
                raise(Errc::AuthFailure, "chat provider returned " + std::to_string(response.status));
            }
            if (response.status == 413 ||
                (response.status == 400 &&
                 (response.body.find("context_length") != std::string::npos ||
                  response.body.find("maximum context length") != std::string::npos))) {
                raise(Errc::ContextOverflow, "provider rejected prompt length: " + response.body);
            }
            const bool retryable =
                response.status == 0 || response.status == 429 || response.status >= 500;
            if (!retryable) {
                break;
            }
            if (attempt >= config_.max_retries) {
                raise(Errc::ProviderUnavailable,
                      "chat request failed after " + std::to_string(attempt + 1) +
                          " attempts (status " + std::to_string(response.status) + ")");
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
            delay_ms *= 2;
        }
    } catch (...) {
        std::lock_guard lock(throttle_mutex_);
        --in_flight_;
        throw;
    }
    {
        std::lock_guard lock(throttle_mutex_);
        --in_flight_;
    }

    if (response.status != 200) {
        raise(Errc::ProviderUnavailable,
              "chat provider returned " + std::to_string(response.status) + ": " + response.body);
    }

    ChatResponse out;
    out.provider_id = provider_id_;
    out.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                               started)
                         .count();
    try {
        const json parsed = json::parse(response.body);
        out.text = parsed.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
        raise(Errc::ProviderUnavailable, std::string("unparseable chat response: ") + e.what());
    }
    return out;
}

MockScript MockScript::from_sequence(std::vector<std::string> responses) {
    MockScript script;
    script.kind = Kind::Sequence;
    script.sequence = std::move(responses);
    return script;
}

MockScript MockScript::from_streams(std::map<std::string, std::vector<std::string>> responses) {
    MockScript script;
    script.kind = Kind::PerStream;
    script.per_stream = std::move(responses);
    return script;
}

MockScript MockScript::from_rates(double default_rate, std::map<std::string, double> rates) {
    MockScript script;
    script.kind = Kind::Bernoulli;
    script.default_rate = default_rate;
    script.rates = std::move(rates);
    return script;
}

MockScript MockScript::from_exact_counts(
    const std::map<std::string, std::pair<std::size_t, std::size_t>>& successes_of_trials) {
    std::map<std::string, std::vector<std::string>> streams;
    for (const auto& [stream, counts] : successes_of_trials) {
        const auto [successes, trials] = counts;
        std::vector<std::string> responses(trials, "NO");
        for (std::size_t i = 0; i < std::min(successes, trials); ++i) {
            responses[i] = "YES";
        }
        streams.emplace(stream, std::move(responses));
    }
    return from_streams(std::move(streams));
}

MockChatClient::MockChatClient(MockScript script, std::uint64_t seed)
    : script_(std::move(script)), seed_(seed) {}

ChatResponse MockChatClient::complete(const ChatRequest&, const CallContext& context) {
    ChatResponse response;
    response.provider_id = provider_id_;
    switch (script_.kind) {
        case MockScript::Kind::Sequence: {
            std::lock_guard lock(sequence_mutex_);
            if (sequence_pos_ >= script_.sequence.size()) {
                raise(Errc::ScriptExhausted,
                      "sequence of " + std::to_string(script_.sequence.size()) + " responses overrun");
            }
            response.text = script_.sequence[sequence_pos_++];
            break;
        }
        case MockScript::Kind::PerStream: {
            const auto found = script_.per_stream.find(context.stream_id);
            if (found == script_.per_stream.end() || context.call_index >= found->second.size()) {
                raise(Errc::ScriptExhausted, "no scripted response for stream '" +
                                                 context.stream_id + "' call " +
                                                 std::to_string(context.call_index));
            }
            response.text = found->second[context.call_index];
            break;
        }
        case MockScript::Kind::Bernoulli: {
            double rate = script_.default_rate;
            if (const auto found = script_.rates.find(context.stream_id);
                found != script_.rates.end()) {
                rate = found->second;
            }
            const double draw = seeded_uniform(seed_, context.stream_id, context.call_index);
            response.text = draw < rate ? "YES" : "NO";
            break;
        }
    }
    return response;
}

} // namespace ragaudit
