#pragma once

#include "ragaudit/embeddings.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <functional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace ragaudit {

struct VectorRecord {
    std::string id; // chunk_id
    EmbeddingVector vector;
    // At least {contract_id, seq_index, labels}; indexing also stores the
    // chunk text here so retrieval hits can be rendered into prompts.
    nlohmann::json metadata;
};

struct RetrievalHit {
    std::string id;
    double score = 0.0; // cosine similarity in [-1, 1]
    nlohmann::json metadata;
};

struct IndexStats {
    std::size_t count = 0;
    std::size_t dim = 0;
    std::string provider_id;
};

// Embedded vector index: exact full-scan cosine top-k with deterministic
// ordering (score descending, ties by id ascending). Reads are safe
// concurrently; upserts take an exclusive lock so a query never observes a
// partially applied batch.
class VectorIndex {
public:
    VectorIndex(std::size_t dim, std::string provider_id);

    // Movable so load() can return by value; moving a live index that other
    // threads are querying is not supported.
    VectorIndex(VectorIndex&& other) noexcept;
    VectorIndex& operator=(VectorIndex&& other) noexcept;

    // Records with existing ids are replaced. Rejects vectors of the wrong
    // dimension (DimensionMismatch) and zero vectors (ZeroVector: cosine is
    // undefined for them). Validates the whole batch before applying it.
    IndexStats upsert(std::vector<VectorRecord> records);

    std::vector<RetrievalHit> query_top_k(const EmbeddingVector& query, std::size_t k) const;
    // Variant with an exclusion predicate, applied during the scan so the
    // result still holds min(k, surviving records) hits.
    std::vector<RetrievalHit> query_top_k(
        const EmbeddingVector& query, std::size_t k,
        const std::function<bool(const VectorRecord&)>& exclude) const;

    IndexStats stats() const;

    // Binary index file: header {magic "RAGX", version, dim, count,
    // provider_id}, then per record {id, float32 values, metadata JSON},
    // all length-prefixed, with a trailing CRC32 over everything before it.
    void persist(const std::filesystem::path& path) const;
    static VectorIndex load(const std::filesystem::path& path);

    static constexpr char kMagic[4] = {'R', 'A', 'G', 'X'};
    static constexpr std::uint32_t kFormatVersion = 1;

private:
    mutable std::shared_mutex mutex_;
    std::size_t dim_;
    std::string provider_id_;
    std::vector<VectorRecord> records_;
    std::vector<double> norms_; // cached L2 norms, parallel to records_
    std::unordered_map<std::string, std::size_t> position_by_id_;
};

} // namespace ragaudit
