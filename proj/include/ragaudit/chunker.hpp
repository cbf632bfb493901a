#pragma once

#include "ragaudit/corpus.hpp"
#include "ragaudit/tokenizer.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace ragaudit {

inline constexpr std::size_t kDefaultChunkSize = 1024;

struct Chunk {
    std::string chunk_id;   // "<contract_id>:<seq_index>"
    std::string contract_id;
    std::size_t seq_index = 0;
    std::string text;
    std::size_t token_count = 0;
};

// Splits the document's token stream into consecutive chunks of exactly
// chunk_size tokens (the last chunk may be short). No overlap, no gaps:
// concatenating chunk texts in seq_index order reproduces the source
// byte-exactly. An empty document yields an empty list.
std::vector<Chunk> chunk_document(const ContractDocument& doc, std::size_t chunk_size,
                                  const Tokenizer& tokenizer = default_tokenizer());

// Chunk store: JSON Lines with a {tokenizer_id} header line.
void save_chunks(const std::vector<Chunk>& chunks, const std::string& tokenizer_id,
                 const std::filesystem::path& path);
std::pair<std::vector<Chunk>, std::string> load_chunks(const std::filesystem::path& path);

} // namespace ragaudit
