#pragma once

#include "ragaudit/chunker.hpp"
#include "ragaudit/corpus.hpp"
#include "ragaudit/embeddings.hpp"
#include "ragaudit/llmclient.hpp"
#include "ragaudit/promptkit.hpp"
#include "ragaudit/vectorstore.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ragaudit {

enum class AuditMode { Guided, Blind };

const char* audit_mode_name(AuditMode mode);
AuditMode audit_mode_from_name(const std::string& name);

struct AuditJob {
    ContractDocument contract; // source_text loaded
    AuditMode mode = AuditMode::Guided;
    std::optional<VulnerabilityType> vulnerability; // required iff Guided
    std::size_t k = 5;
    std::size_t trials = 40;
    std::uint64_t seed = 0;
};

struct TrialRecord {
    std::string contract_id;
    AuditMode mode = AuditMode::Guided;
    std::optional<std::string> vulnerability_name;
    std::size_t trial_index = 0;
    Verdict verdict;
    std::vector<std::string> retrieved_ids; // rank order, length <= k
    std::string prompt_checksum;            // fnv1a64 hex of the sent prompt text
    bool truncated = false;
    std::string timestamp;
    // Set when the trial failed before producing a verdict; such records
    // carry a NON_COMPLIANT verdict so aggregation denominators stay honest.
    std::optional<std::string> error;
};

struct AuditParams {
    std::size_t token_budget = kDefaultTokenBudget; // 128000
    int max_tokens = 5;
    double temperature = 0.7;
    std::string model_name = "gpt-4-1106-preview";
    bool self_exclusion = true; // drop hits from the audited contract itself
    std::optional<std::filesystem::path> prompt_log_dir;
    // When set, stamped on every record instead of wall-clock time; seeded
    // mock runs use this so reruns produce byte-identical logs.
    std::optional<std::string> fixed_timestamp;
};

struct AuditServices {
    VectorIndex* index = nullptr;
    EmbeddingProvider* embedder = nullptr;
    ChatClient* llm = nullptr;
    const Tokenizer* tokenizer = &default_tokenizer();
    std::size_t chunk_size = kDefaultChunkSize; // for the over-long-query fallback
    AuditParams params;
};

// Retrieval query is the embedding of the contract source text only; the
// job's vulnerability metadata never reaches the query. Contracts longer
// than the embedder's input limit are queried by their first chunk.
std::vector<RetrievalHit> retrieve_context(const ContractDocument& contract, std::size_t k,
                                           const AuditServices& services);

// One complete trial: retrieve -> render -> fit budget -> complete ->
// parse. A ContextOverflow from the provider earns one retry with a 5%
// tighter budget. Any stage failure is rethrown as TrialFailed.
TrialRecord run_trial(const AuditJob& job, std::size_t trial_index, const AuditServices& services);

// Runs every (job, trial) pair, up to `parallelism` trials concurrently.
// Failed trials become error records; output is sorted by (contract_id,
// vulnerability_name, trial_index) regardless of execution interleaving.
std::vector<TrialRecord> run_batch(const std::vector<AuditJob>& jobs,
                                   const AuditServices& services, std::size_t parallelism = 1);

// Trial log: JSON Lines, one record per line.
void save_trials(const std::vector<TrialRecord>& trials, const std::filesystem::path& path);
std::vector<TrialRecord> load_trials(const std::filesystem::path& path);

} // namespace ragaudit
