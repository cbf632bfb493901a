#include "ragaudit/chunker.hpp"

#include "ragaudit/errors.hpp"
#include "ragaudit/util.hpp"

#include <nlohmann/json.hpp>

#include <sstream>

using json = nlohmann::json;

namespace ragaudit {

std::vector<Chunk> chunk_document(const ContractDocument& doc, std::size_t chunk_size,
                                  const Tokenizer& tokenizer) {
    if (chunk_size == 0) {
        raise(Errc::IoError, "chunk_size must be >= 1");
    }
    const std::vector<TokenId> tokens = tokenizer.encode(doc.source_text);
    std::vector<Chunk> chunks;
    if (tokens.empty()) {
        return chunks;
    }
    chunks.reserve((tokens.size() + chunk_size - 1) / chunk_size);
    for (std::size_t start = 0; start < tokens.size(); start += chunk_size) {
        const std::size_t len = std::min(chunk_size, tokens.size() - start);
        Chunk chunk;
        chunk.contract_id = doc.id;
        chunk.seq_index = chunks.size();
        chunk.chunk_id = doc.id + ":" + std::to_string(chunk.seq_index);
        chunk.token_count = len;
        chunk.text = tokenizer.decode(std::span<const TokenId>(tokens.data() + start, len));
        chunks.push_back(std::move(chunk));
    }
    return chunks;
}

void save_chunks(const std::vector<Chunk>& chunks, const std::string& tokenizer_id,
                 const std::filesystem::path& path) {
    std::ostringstream out;
    out << json{{"tokenizer_id", tokenizer_id}}.dump() << "\n";
    for (const auto& chunk : chunks) {
        out << json{{"chunk_id", chunk.chunk_id},
                    {"contract_id", chunk.contract_id},
                    {"seq_index", chunk.seq_index},
                    {"token_count", chunk.token_count},
                    {"text", chunk.text}}
                .dump()
            << "\n";
    }
    util::write_file(path, out.str());
}

std::pair<std::vector<Chunk>, std::string> load_chunks(const std::filesystem::path& path) {
    const auto lines = util::read_lines(path);
    if (lines.empty()) {
        raise(Errc::IoError, path.string() + ": empty chunk store");
    }
    std::vector<Chunk> chunks;
    std::string tokenizer_id;
    try {
        tokenizer_id = json::parse(lines[0]).at("tokenizer_id").get<std::string>();
        for (std::size_t i = 1; i < lines.size(); ++i) {
            if (lines[i].empty()) continue;
            const json j = json::parse(lines[i]);
            Chunk chunk;
            chunk.chunk_id = j.at("chunk_id").get<std::string>();
            chunk.contract_id = j.at("contract_id").get<std::string>();
            chunk.seq_index = j.at("seq_index").get<std::size_t>();
            chunk.token_count = j.at("token_count").get<std::size_t>();
            chunk.text = j.at("text").get<std::string>();
            chunks.push_back(std::move(chunk));
        }
    } catch (const json::exception& e) {
        raise(Errc::IoError, path.string() + ": malformed chunk store: " + e.what());
    }
    return {std::move(chunks), std::move(tokenizer_id)};
}

} // namespace ragaudit
