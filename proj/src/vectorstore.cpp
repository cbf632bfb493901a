#include "ragaudit/vectorstore.hpp"

#include "ragaudit/errors.hpp"
#include "ragaudit/util.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>

using json = nlohmann::json;

namespace ragaudit {

namespace {

double l2_norm(const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) sum += v * v;
    return std::sqrt(sum);
}

void append_u32(std::string& out, std::uint32_t value) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xff));
}

void append_u64(std::string& out, std::uint64_t value) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xff));
}

void append_f32(std::string& out, float value) {
    std::uint32_t bits;
    std::memcpy(&bits, &value, 4);
    append_u32(out, bits);
}

// Bounds-checked little-endian reader; any overrun means a damaged file.
class Cursor {
public:
    Cursor(const std::string& data, const std::string& origin)
        : data_(data), origin_(origin) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t value = 0;
        for (int i = 0; i < 4; ++i)
            value |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        pos_ += 4;
        return value;
    }

    std::uint64_t u64() {
        need(8);
        std::uint64_t value = 0;
        for (int i = 0; i < 8; ++i)
            value |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        pos_ += 8;
        return value;
    }

    float f32() {
        const std::uint32_t bits = u32();
        float value;
        std::memcpy(&value, &bits, 4);
        return value;
    }

    std::string bytes(std::size_t n) {
        need(n);
        std::string value = data_.substr(pos_, n);
        pos_ += n;
        return value;
    }

    std::size_t pos() const { return pos_; }

private:
    void need(std::size_t n) {
        if (pos_ + n > data_.size()) {
            raise(Errc::CorruptIndex, origin_ + ": truncated at offset " + std::to_string(pos_));
        }
    }

    const std::string& data_;
    std::string origin_;
    std::size_t pos_ = 0;
};

} // namespace

VectorIndex::VectorIndex(std::size_t dim, std::string provider_id)
    : dim_(dim), provider_id_(std::move(provider_id)) {}

VectorIndex::VectorIndex(VectorIndex&& other) noexcept
    : dim_(other.dim_),
      provider_id_(std::move(other.provider_id_)),
      records_(std::move(other.records_)),
      norms_(std::move(other.norms_)),
      position_by_id_(std::move(other.position_by_id_)) {}

VectorIndex& VectorIndex::operator=(VectorIndex&& other) noexcept {
    if (this != &other) {
        dim_ = other.dim_;
        provider_id_ = std::move(other.provider_id_);
        records_ = std::move(other.records_);
        norms_ = std::move(other.norms_);
        position_by_id_ = std::move(other.position_by_id_);
    }
    return *this;
}

IndexStats VectorIndex::upsert(std::vector<VectorRecord> records) {
    for (const auto& record : records) {
        if (record.vector.dim() != dim_) {
            raise(Errc::DimensionMismatch, "record '" + record.id + "' has dim " +
                                               std::to_string(record.vector.dim()) + ", index dim " +
                                               std::to_string(dim_));
        }
        if (l2_norm(record.vector.values) == 0.0) {
            raise(Errc::ZeroVector, "record '" + record.id + "' is the zero vector");
        }
    }

    std::unique_lock lock(mutex_);
    for (auto& record : records) {
        const double norm = l2_norm(record.vector.values);
        if (auto found = position_by_id_.find(record.id); found != position_by_id_.end()) {
            records_[found->second] = std::move(record);
            norms_[found->second] = norm;
        } else {
            position_by_id_.emplace(record.id, records_.size());
            records_.push_back(std::move(record));
            norms_.push_back(norm);
        }
    }
    return {records_.size(), dim_, provider_id_};
}

std::vector<RetrievalHit> VectorIndex::query_top_k(const EmbeddingVector& query,
                                                   std::size_t k) const {
    return query_top_k(query, k, nullptr);
}

std::vector<RetrievalHit> VectorIndex::query_top_k(
    const EmbeddingVector& query, std::size_t k,
    const std::function<bool(const VectorRecord&)>& exclude) const {
    if (query.dim() != dim_) {
        raise(Errc::DimensionMismatch, "query dim " + std::to_string(query.dim()) +
                                           ", index dim " + std::to_string(dim_));
    }
    const double query_norm = l2_norm(query.values);
    if (query_norm == 0.0) {
        raise(Errc::ZeroVector, "query is the zero vector");
    }

    std::shared_lock lock(mutex_);
    std::vector<std::pair<double, std::size_t>> scored;
    scored.reserve(records_.size());
    for (std::size_t i = 0; i < records_.size(); ++i) {
        if (exclude && exclude(records_[i])) continue;
        double dot = 0.0;
        const auto& values = records_[i].vector.values;
        for (std::size_t d = 0; d < dim_; ++d) dot += query.values[d] * values[d];
        scored.emplace_back(dot / (query_norm * norms_[i]), i);
    }

    const auto better = [this](const std::pair<double, std::size_t>& a,
                               const std::pair<double, std::size_t>& b) {
        if (a.first != b.first) return a.first > b.first;
        return records_[a.second].id < records_[b.second].id;
    };
    const std::size_t take = std::min(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take),
                      scored.end(), better);

    std::vector<RetrievalHit> hits;
    hits.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        const auto& record = records_[scored[i].second];
        hits.push_back({record.id, scored[i].first, record.metadata});
    }
    return hits;
}

IndexStats VectorIndex::stats() const {
    std::shared_lock lock(mutex_);
    return {records_.size(), dim_, provider_id_};
}

void VectorIndex::persist(const std::filesystem::path& path) const {
    std::shared_lock lock(mutex_);
    std::string body;
    body.append(kMagic, 4);
    append_u32(body, kFormatVersion);
    append_u32(body, static_cast<std::uint32_t>(dim_));
    append_u64(body, records_.size());
    append_u32(body, static_cast<std::uint32_t>(provider_id_.size()));
    body += provider_id_;
    for (const auto& record : records_) {
        append_u32(body, static_cast<std::uint32_t>(record.id.size()));
        body += record.id;
        for (double v : record.vector.values) {
            append_f32(body, static_cast<float>(v));
        }
        const std::string meta = record.metadata.is_null() ? "{}" : record.metadata.dump();
        append_u32(body, static_cast<std::uint32_t>(meta.size()));
        body += meta;
    }
    append_u32(body, util::crc32(body));
    util::write_file(path, body);
}

VectorIndex VectorIndex::load(const std::filesystem::path& path) {
    const std::string data = util::read_file(path);
    if (data.size() < 4 + 4 + 4 + 8 + 4 + 4 || std::memcmp(data.data(), kMagic, 4) != 0) {
        raise(Errc::CorruptIndex, path.string() + ": bad magic or truncated header");
    }
    const std::string body = data.substr(0, data.size() - 4);
    Cursor trailer(data, path.string());
    trailer.bytes(data.size() - 4);
    const std::uint32_t stored_crc = trailer.u32();
    if (util::crc32(body) != stored_crc) {
        raise(Errc::CorruptIndex, path.string() + ": checksum mismatch");
    }

    Cursor cursor(body, path.string());
    cursor.bytes(4); // magic, already checked
    const std::uint32_t version = cursor.u32();
    if (version != kFormatVersion) {
        raise(Errc::VersionMismatch, path.string() + ": format version " + std::to_string(version) +
                                         ", expected " + std::to_string(kFormatVersion));
    }
    const std::uint32_t dim = cursor.u32();
    const std::uint64_t count = cursor.u64();
    const std::string provider_id = cursor.bytes(cursor.u32());

    VectorIndex index(dim, provider_id);
    std::vector<VectorRecord> records;
    records.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        VectorRecord record;
        record.id = cursor.bytes(cursor.u32());
        record.vector.provider_id = provider_id;
        record.vector.values.resize(dim);
        for (std::uint32_t d = 0; d < dim; ++d) {
            record.vector.values[d] = cursor.f32();
        }
        const std::string meta = cursor.bytes(cursor.u32());
        try {
            record.metadata = json::parse(meta);
        } catch (const json::exception& e) {
            raise(Errc::CorruptIndex, path.string() + ": bad metadata JSON: " + e.what());
        }
        records.push_back(std::move(record));
    }
    if (cursor.pos() != body.size()) {
        raise(Errc::CorruptIndex, path.string() + ": trailing bytes after last record");
    }
    if (!records.empty()) {
        index.upsert(std::move(records));
    }
    return index;
}

} // namespace ragaudit
