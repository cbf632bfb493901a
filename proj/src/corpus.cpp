#include "ragaudit/corpus.hpp"

#include "ragaudit/errors.hpp"
#include "ragaudit/util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace ragaudit {

const char* split_name(Split split) {
    switch (split) {
        case Split::Unassigned: return "UNASSIGNED";
        case Split::Index: return "INDEX";
        case Split::Holdout: return "HOLDOUT";
    }
    return "UNASSIGNED";
}

Split split_from_name(const std::string& name) {
    if (name == "INDEX") return Split::Index;
    if (name == "HOLDOUT") return Split::Holdout;
    if (name == "UNASSIGNED") return Split::Unassigned;
    raise(Errc::CorruptIndex, "unknown split value '" + name + "'");
}

namespace {

bool looks_binary(const std::string& content) {
    return content.find('\0') != std::string::npos;
}

std::map<std::string, std::vector<std::string>> read_label_map(const fs::path& path) {
    json parsed;
    try {
        parsed = json::parse(util::read_file(path));
    } catch (const json::exception& e) {
        raise(Errc::MalformedLabelMap, path.string() + ": " + e.what());
    }
    if (!parsed.is_object()) {
        raise(Errc::MalformedLabelMap, path.string() + ": top level must be an object");
    }
    std::map<std::string, std::vector<std::string>> labels;
    for (const auto& [id, value] : parsed.items()) {
        if (!value.is_array()) {
            raise(Errc::MalformedLabelMap, path.string() + ": value for '" + id + "' must be an array");
        }
        std::set<std::string> unique;
        for (const auto& entry : value) {
            if (!entry.is_string()) {
                raise(Errc::MalformedLabelMap, path.string() + ": labels must be strings");
            }
            unique.insert(entry.get<std::string>());
        }
        labels.emplace(id, std::vector<std::string>(unique.begin(), unique.end()));
    }
    return labels;
}

json document_to_json(const ContractDocument& doc) {
    return json{
        {"id", doc.id},
        {"path", doc.path},
        {"byte_len", doc.byte_len},
        {"checksum", doc.checksum},
        {"labels", doc.labels},
        {"split", split_name(doc.split)},
    };
}

ContractDocument document_from_json(const json& j) {
    ContractDocument doc;
    doc.id = j.at("id").get<std::string>();
    doc.path = j.at("path").get<std::string>();
    doc.byte_len = j.at("byte_len").get<std::uint64_t>();
    doc.checksum = j.at("checksum").get<std::string>();
    doc.labels = j.at("labels").get<std::vector<std::string>>();
    doc.split = split_from_name(j.at("split").get<std::string>());
    return doc;
}

} // namespace

CorpusManifest scan_corpus(const fs::path& root, const std::optional<fs::path>& label_map) {
    std::error_code ec;
    if (!fs::exists(root, ec) || !fs::is_directory(root, ec)) {
        raise(Errc::MissingRoot, root.string());
    }

    std::map<std::string, std::vector<std::string>> labels;
    if (label_map) {
        labels = read_label_map(*label_map);
    }

    CorpusManifest manifest;
    manifest.root = root.string();
    manifest.created_at = util::iso8601_utc_now();

    for (fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec), end;
         it != end; it.increment(ec)) {
        if (ec) {
            manifest.warnings.push_back("traversal error: " + ec.message());
            ec.clear();
            continue;
        }
        if (!it->is_regular_file(ec) || it->path().extension() != ".sol") {
            continue;
        }
        const fs::path& file = it->path();
        const std::string id = fs::relative(file, root, ec).generic_string();

        std::string content;
        try {
            content = util::read_file(file);
        } catch (const Error& e) {
            manifest.warnings.push_back("skipped " + id + ": " + e.what());
            continue;
        }
        if (looks_binary(content)) {
            manifest.warnings.push_back("skipped " + id + ": binary content");
            continue;
        }

        ContractDocument doc;
        doc.id = id;
        doc.path = file.string();
        doc.byte_len = content.size();
        doc.checksum = util::to_hex(util::fnv1a64(content));
        doc.source_text = std::move(content);
        if (auto found = labels.find(id); found != labels.end()) {
            doc.labels = found->second;
        }
        manifest.documents.push_back(std::move(doc));
    }

    std::sort(manifest.documents.begin(), manifest.documents.end(),
              [](const ContractDocument& a, const ContractDocument& b) { return a.id < b.id; });
    std::sort(manifest.warnings.begin(), manifest.warnings.end());
    return manifest;
}

CorpusManifest split_corpus(CorpusManifest manifest, double holdout_fraction, std::uint64_t seed,
                            bool force) {
    if (!(holdout_fraction >= 0.0 && holdout_fraction <= 1.0)) {
        raise(Errc::FractionOutOfRange, "holdout_fraction " + std::to_string(holdout_fraction));
    }
    if (!force) {
        for (const auto& doc : manifest.documents) {
            if (doc.split != Split::Unassigned) {
                raise(Errc::AlreadySplit, "document '" + doc.id + "' already assigned; use force");
            }
        }
    }

    const std::size_t n = manifest.documents.size();
    const auto holdout_count =
        static_cast<std::size_t>(std::llround(holdout_fraction * static_cast<double>(n)));

    // Rank documents by seeded hash of id; the first holdout_count become
    // the holdout set. Ties broken by id so the order is total.
    std::vector<std::size_t> order(n);
    std::vector<std::uint64_t> score(n);
    for (std::size_t i = 0; i < n; ++i) {
        order[i] = i;
        score[i] = util::fnv1a64(manifest.documents[i].id, util::fnv1a64_mix(seed, util::kFnvOffset));
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (score[a] != score[b]) return score[a] < score[b];
        return manifest.documents[a].id < manifest.documents[b].id;
    });

    for (std::size_t rank = 0; rank < n; ++rank) {
        manifest.documents[order[rank]].split =
            rank < holdout_count ? Split::Holdout : Split::Index;
    }
    return manifest;
}

std::vector<VulnerabilityType> load_catalog(const fs::path& path) {
    json parsed;
    try {
        parsed = json::parse(util::read_file(path));
    } catch (const json::exception& e) {
        raise(Errc::MalformedCatalog, path.string() + ": " + e.what());
    }
    if (!parsed.is_array()) {
        raise(Errc::MalformedCatalog, path.string() + ": top level must be an array");
    }
    std::vector<VulnerabilityType> catalog;
    std::set<std::string> seen;
    for (const auto& entry : parsed) {
        if (!entry.is_object() || !entry.contains("name") || !entry.contains("description")) {
            raise(Errc::MalformedCatalog, path.string() + ": entries need {name, description}");
        }
        VulnerabilityType type{entry.at("name").get<std::string>(),
                               entry.at("description").get<std::string>()};
        if (!seen.insert(type.name).second) {
            raise(Errc::DuplicateTypeName, "'" + type.name + "' appears more than once");
        }
        catalog.push_back(std::move(type));
    }
    return catalog;
}

void save_manifest(const CorpusManifest& manifest, const fs::path& path) {
    std::ostringstream out;
    out << json{{"root", manifest.root},
                {"checksum_algo", manifest.checksum_algo},
                {"created_at", manifest.created_at},
                {"warnings", manifest.warnings}}
            .dump()
        << "\n";
    for (const auto& doc : manifest.documents) {
        out << document_to_json(doc).dump() << "\n";
    }
    util::write_file(path, out.str());
}

CorpusManifest load_manifest(const fs::path& path) {
    const auto lines = util::read_lines(path);
    if (lines.empty()) {
        raise(Errc::IoError, path.string() + ": empty manifest");
    }
    CorpusManifest manifest;
    try {
        const json header = json::parse(lines[0]);
        manifest.root = header.at("root").get<std::string>();
        manifest.checksum_algo = header.at("checksum_algo").get<std::string>();
        manifest.created_at = header.at("created_at").get<std::string>();
        manifest.warnings = header.at("warnings").get<std::vector<std::string>>();
        for (std::size_t i = 1; i < lines.size(); ++i) {
            if (lines[i].empty()) continue;
            manifest.documents.push_back(document_from_json(json::parse(lines[i])));
        }
    } catch (const json::exception& e) {
        raise(Errc::IoError, path.string() + ": malformed manifest: " + e.what());
    }
    return manifest;
}

std::string load_document_text(const ContractDocument& doc) {
    if (!doc.source_text.empty() || doc.byte_len == 0) {
        return doc.source_text;
    }
    return util::read_file(doc.path);
}

} // namespace ragaudit
