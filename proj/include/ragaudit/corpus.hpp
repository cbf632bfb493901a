#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ragaudit {

enum class Split { Unassigned, Index, Holdout };

const char* split_name(Split split);
Split split_from_name(const std::string& name);

// One source contract; the unit of audit. `source_text` is populated by
// scan_corpus; manifests loaded from disk carry metadata only and the text
// is re-read from `path` on demand (load_document_text).
struct ContractDocument {
    std::string id;          // path relative to the ingest root, '/' separators
    std::string path;        // absolute or root-relative filesystem path
    std::string source_text;
    std::uint64_t byte_len = 0;
    std::string checksum;    // fnv1a64 hex of the file bytes
    std::vector<std::string> labels; // sorted, unique vulnerability-type names
    Split split = Split::Unassigned;
};

struct VulnerabilityType {
    std::string name;
    std::string description;
};

struct CorpusManifest {
    std::string root;
    std::string checksum_algo = "fnv1a64";
    std::string created_at;
    std::vector<std::string> warnings;
    std::vector<ContractDocument> documents; // sorted lexicographically by id
};

// Recursively collects every .sol file under `root`. Files that cannot be
// read or that look binary (embedded NUL bytes) are skipped and reported in
// manifest warnings. Labels come from an optional JSON label map
// {document_id: [type names]}.
CorpusManifest scan_corpus(const std::filesystem::path& root,
                           const std::optional<std::filesystem::path>& label_map = std::nullopt);

// Assigns every document to INDEX or HOLDOUT. |HOLDOUT| = round(fraction*N).
// The assignment depends only on (seed, document ids): documents are ranked
// by a seeded hash of their id and the top of that ranking becomes the
// holdout set, so a small change in the fraction never reshuffles
// assignments. Requires all documents UNASSIGNED unless `force` is set.
CorpusManifest split_corpus(CorpusManifest manifest, double holdout_fraction, std::uint64_t seed,
                            bool force = false);

// Catalog file: JSON array of {name, description}. Duplicate names rejected.
std::vector<VulnerabilityType> load_catalog(const std::filesystem::path& path);

void save_manifest(const CorpusManifest& manifest, const std::filesystem::path& path);
CorpusManifest load_manifest(const std::filesystem::path& path);

// Reads the document's source from disk (manifest-loaded documents carry no
// text). Returns doc.source_text unchanged when already present.
std::string load_document_text(const ContractDocument& doc);

} // namespace ragaudit
