#include "ragaudit/embeddings.hpp"

#include "ragaudit/errors.hpp"
#include "ragaudit/util.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

using json = nlohmann::json;

namespace ragaudit {

namespace {

bool is_word_char(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

} // namespace

EmbeddingVector hash_embed(std::string_view text, std::size_t dim, std::uint64_t seed) {
    EmbeddingVector vec;
    vec.provider_id = "hash/v1";
    vec.values.assign(dim, 0.0);

    const std::uint64_t basis = util::fnv1a64_mix(seed, util::kFnvOffset);
    std::size_t pos = 0;
    while (pos < text.size()) {
        while (pos < text.size() && !is_word_char(static_cast<unsigned char>(text[pos]))) ++pos;
        std::size_t end = pos;
        while (end < text.size() && is_word_char(static_cast<unsigned char>(text[end]))) ++end;
        if (end > pos) {
            const std::uint64_t h = util::fnv1a64(text.substr(pos, end - pos), basis);
            const std::size_t bucket = static_cast<std::size_t>(h % dim);
            const double sign = (h >> 63) ? -1.0 : 1.0;
            vec.values[bucket] += sign;
        }
        pos = end;
    }

    double norm_sq = 0.0;
    for (double v : vec.values) norm_sq += v * v;
    if (norm_sq > 0.0) {
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (double& v : vec.values) v *= inv;
    }
    return vec;
}

HashEmbedder::HashEmbedder(std::size_t dim, std::uint64_t seed) : seed_(seed) {
    config_.provider_id = "hash/v1";
    config_.model_name = "feature-hash";
    config_.dim = dim;
    config_.max_input_tokens = 0; // no input limit
}

std::vector<EmbeddingVector> HashEmbedder::request(const std::vector<std::string>& texts) {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& text : texts) {
        out.push_back(hash_embed(text, config_.dim, seed_));
    }
    return out;
}

RemoteEmbedder::RemoteEmbedder(EmbeddingProviderConfig config, HttpTransport& transport)
    : config_(std::move(config)), transport_(transport) {
    if (config_.endpoint_url.empty()) {
        config_.endpoint_url = base_url_from_env();
        if (!config_.endpoint_url.empty() && config_.endpoint_url.find("/v1/") == std::string::npos) {
            config_.endpoint_url += "/v1/embeddings";
        }
    }
}

std::vector<EmbeddingVector> RemoteEmbedder::request(const std::vector<std::string>& texts) {
    if (config_.endpoint_url.empty()) {
        raise(Errc::ProviderUnavailable, "no embedding endpoint configured (set RAGAUDIT_BASE_URL)");
    }
    const json body = {{"model", config_.model_name}, {"input", texts}};
    HttpHeaders headers;
    if (const std::string key = api_key_from_env(); !key.empty()) {
        headers.emplace_back("Authorization", "Bearer " + key);
    }

    HttpResponse response;
    int delay_ms = config_.retry_initial_delay_ms;
    for (int attempt = 0;; ++attempt) {
        response = transport_.post_json(config_.endpoint_url, body.dump(), headers, config_.timeout_s);
        if (response.status == 401 || response.status == 403) {
            raise(Errc::AuthFailure, "embedding provider returned " + std::to_string(response.status));
        }
        const bool retryable = response.status == 0 || response.status == 429 || response.status >= 500;
        if (!retryable) {
            break;
        }
        if (attempt >= config_.max_retries) {
            raise(Errc::ProviderUnavailable,
                  "embedding request failed after " + std::to_string(attempt + 1) +
                      " attempts (status " + std::to_string(response.status) + ")");
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
        delay_ms *= 2;
    }
    if (response.status != 200) {
        raise(Errc::ProviderUnavailable,
              "embedding provider returned " + std::to_string(response.status) + ": " + response.body);
    }

    json parsed;
    try {
        parsed = json::parse(response.body);
    } catch (const json::exception& e) {
        raise(Errc::ProviderUnavailable, std::string("unparseable embedding response: ") + e.what());
    }
    if (!parsed.contains("data") || !parsed["data"].is_array() ||
        parsed["data"].size() != texts.size()) {
        raise(Errc::ProviderUnavailable, "embedding response missing per-input data");
    }

    std::vector<EmbeddingVector> out(texts.size());
    for (const auto& item : parsed["data"]) {
        const auto index = item.at("index").get<std::size_t>();
        if (index >= out.size()) {
            raise(Errc::ProviderUnavailable, "embedding response index out of range");
        }
        EmbeddingVector vec;
        vec.provider_id = config_.provider_id;
        vec.values = item.at("embedding").get<std::vector<double>>();
        out[index] = std::move(vec);
    }
    return out;
}

EmbeddingVector embed_text(const std::string& text, EmbeddingProvider& provider) {
    if (util::is_blank(text)) {
        raise(Errc::EmptyText, "refusing to embed empty text");
    }
    auto vectors = provider.request({text});
    if (vectors.size() != 1) {
        raise(Errc::ProviderUnavailable, "provider returned wrong result count");
    }
    if (vectors[0].dim() != provider.config().dim) {
        raise(Errc::DimensionMismatch,
              "provider returned " + std::to_string(vectors[0].dim()) + " values, expected " +
                  std::to_string(provider.config().dim));
    }
    for (double v : vectors[0].values) {
        if (!std::isfinite(v)) {
            raise(Errc::DimensionMismatch, "provider returned non-finite value");
        }
    }
    return std::move(vectors[0]);
}

std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts,
                                         EmbeddingProvider& provider) {
    for (const auto& text : texts) {
        if (util::is_blank(text)) {
            raise(Errc::EmptyText, "batch contains empty text");
        }
    }
    const std::size_t batch_size = std::max<std::size_t>(1, provider.config().batch_size);
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (std::size_t start = 0; start < texts.size(); start += batch_size) {
        const std::size_t len = std::min(batch_size, texts.size() - start);
        std::vector<std::string> sub(texts.begin() + static_cast<std::ptrdiff_t>(start),
                                     texts.begin() + static_cast<std::ptrdiff_t>(start + len));
        auto vectors = provider.request(sub);
        if (vectors.size() != sub.size()) {
            raise(Errc::ProviderUnavailable, "provider returned wrong result count");
        }
        for (auto& vec : vectors) {
            if (vec.dim() != provider.config().dim) {
                raise(Errc::DimensionMismatch,
                      "provider returned " + std::to_string(vec.dim()) + " values, expected " +
                          std::to_string(provider.config().dim));
            }
            out.push_back(std::move(vec));
        }
    }
    return out;
}

EmbeddingCache::EmbeddingCache(std::filesystem::path path) : path_(std::move(path)) {
    std::ifstream in(path_, std::ios::binary);
    if (!in) {
        return; // fresh cache
    }
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            const json j = json::parse(line);
            entries_[{j.at("text_checksum").get<std::string>(),
                      j.at("provider_id").get<std::string>()}] =
                j.at("values").get<std::vector<double>>();
        } catch (const json::exception&) {
            // Partial trailing line from an interrupted run; ignore.
        }
    }
}

std::optional<EmbeddingVector> EmbeddingCache::find(const std::string& text_checksum,
                                                    const std::string& provider_id) const {
    const auto it = entries_.find({text_checksum, provider_id});
    if (it == entries_.end()) {
        return std::nullopt;
    }
    EmbeddingVector vec;
    vec.provider_id = provider_id;
    vec.values = it->second;
    return vec;
}

void EmbeddingCache::put(const std::string& text_checksum, const EmbeddingVector& vector) {
    entries_[{text_checksum, vector.provider_id}] = vector.values;
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    if (!out) {
        raise(Errc::WriteFailure, "cannot append to cache " + path_.string());
    }
    out << json{{"text_checksum", text_checksum},
                {"provider_id", vector.provider_id},
                {"values", vector.values}}
            .dump()
        << "\n";
}

} // namespace ragaudit
