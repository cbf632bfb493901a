#pragma once

#include "ragaudit/http.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ragaudit {

// Values are held as doubles in memory; persistence narrows to float32.
struct EmbeddingVector {
    std::vector<double> values;
    std::string provider_id;

    std::size_t dim() const { return values.size(); }
};

struct EmbeddingProviderConfig {
    std::string provider_id = "hash/v1";
    std::string endpoint_url;       // remote providers; falls back to RAGAUDIT_BASE_URL
    std::string model_name = "text-embedding-ada-002";
    std::size_t dim = 1536;
    std::size_t batch_size = 64;    // max texts per provider request
    int timeout_s = 30;
    int max_retries = 3;
    int retry_initial_delay_ms = 1000; // doubled per attempt
    std::size_t max_input_tokens = 8191; // 0 = unlimited (local embedder)
};

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;

    virtual const EmbeddingProviderConfig& config() const = 0;
    // One provider request; texts.size() must not exceed config().batch_size.
    // Returns one vector per input text, in input order.
    virtual std::vector<EmbeddingVector> request(const std::vector<std::string>& texts) = 0;
};

// Deterministic feature-hashing embedder: splits text into identifier-like
// word tokens ([A-Za-z0-9_] runs), hashes each with the seed into a bucket
// with a +/-1 sign, accumulates and L2-normalizes. A text with no word
// tokens yields the zero vector.
EmbeddingVector hash_embed(std::string_view text, std::size_t dim, std::uint64_t seed);

class HashEmbedder final : public EmbeddingProvider {
public:
    explicit HashEmbedder(std::size_t dim = 256, std::uint64_t seed = 0);

    const EmbeddingProviderConfig& config() const override { return config_; }
    std::vector<EmbeddingVector> request(const std::vector<std::string>& texts) override;

private:
    EmbeddingProviderConfig config_;
    std::uint64_t seed_;
};

// Remote embedding provider. Wire protocol: POST {"model":..., "input":[...]}
// to the configured endpoint; response carries a "data" array of
// {"index", "embedding"}. Bearer token from RAGAUDIT_API_KEY. Retries with
// exponential backoff on transport and 5xx/429 failures.
class RemoteEmbedder final : public EmbeddingProvider {
public:
    RemoteEmbedder(EmbeddingProviderConfig config, HttpTransport& transport);

    const EmbeddingProviderConfig& config() const override { return config_; }
    std::vector<EmbeddingVector> request(const std::vector<std::string>& texts) override;

private:
    EmbeddingProviderConfig config_;
    HttpTransport& transport_;
};

// Rejects empty text (EmptyText), checks the returned dimension against the
// provider config (DimensionMismatch).
EmbeddingVector embed_text(const std::string& text, EmbeddingProvider& provider);

// Splits into requests of at most config().batch_size; output order matches
// input order. A failed sub-batch fails the whole call.
std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts,
                                         EmbeddingProvider& provider);

// Optional on-disk cache, JSON Lines {text_checksum, provider_id, values}.
// Used by indexing to resume interrupted embedding passes.
class EmbeddingCache {
public:
    explicit EmbeddingCache(std::filesystem::path path);

    std::optional<EmbeddingVector> find(const std::string& text_checksum,
                                        const std::string& provider_id) const;
    void put(const std::string& text_checksum, const EmbeddingVector& vector);
    std::size_t size() const { return entries_.size(); }

private:
    std::filesystem::path path_;
    std::map<std::pair<std::string, std::string>, std::vector<double>> entries_;
};

} // namespace ragaudit
