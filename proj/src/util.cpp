#include "ragaudit/util.hpp"

#include "ragaudit/errors.hpp"

#include <zlib.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

namespace ragaudit {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::MissingRoot: return "MissingRoot";
        case Errc::MalformedLabelMap: return "MalformedLabelMap";
        case Errc::AlreadySplit: return "AlreadySplit";
        case Errc::FractionOutOfRange: return "FractionOutOfRange";
        case Errc::MalformedCatalog: return "MalformedCatalog";
        case Errc::DuplicateTypeName: return "DuplicateTypeName";
        case Errc::TokenizerMismatch: return "TokenizerMismatch";
        case Errc::InvalidTokenId: return "InvalidTokenId";
        case Errc::ProviderUnavailable: return "ProviderUnavailable";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::EmptyText: return "EmptyText";
        case Errc::ZeroVector: return "ZeroVector";
        case Errc::CorruptIndex: return "CorruptIndex";
        case Errc::VersionMismatch: return "VersionMismatch";
        case Errc::MissingField: return "MissingField";
        case Errc::BudgetTooSmall: return "BudgetTooSmall";
        case Errc::ContextOverflow: return "ContextOverflow";
        case Errc::AuthFailure: return "AuthFailure";
        case Errc::ScriptExhausted: return "ScriptExhausted";
        case Errc::TrialFailed: return "TrialFailed";
        case Errc::KeyMismatch: return "KeyMismatch";
        case Errc::MissingExpectation: return "MissingExpectation";
        case Errc::DuplicateExpectation: return "DuplicateExpectation";
        case Errc::WriteFailure: return "WriteFailure";
        case Errc::IoError: return "IoError";
    }
    return "UnknownError";
}

} // namespace ragaudit

namespace ragaudit::util {

std::string to_hex(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
    return std::string(buf);
}

std::uint32_t crc32(std::string_view data) {
    return static_cast<std::uint32_t>(
        ::crc32(0L, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size())));
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        raise(Errc::IoError, "cannot open " + path.string());
    }
    std::ostringstream out;
    out << in.rdbuf();
    if (in.bad()) {
        raise(Errc::IoError, "read failed for " + path.string());
    }
    return out.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        raise(Errc::WriteFailure, "cannot open " + path.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        raise(Errc::WriteFailure, "write failed for " + path.string());
    }
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        raise(Errc::IoError, "cannot open " + path.string());
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        lines.push_back(line);
    }
    return lines;
}

std::string iso8601_utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return std::string(buf);
}

double round_half_up_1dp(double value) {
    return std::floor(value * 10.0 + 0.5) / 10.0;
}

double round_half_up_3dp(double value) {
    return std::floor(value * 1000.0 + 0.5) / 1000.0;
}

std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return std::string(buf);
}

bool is_blank(std::string_view text) {
    for (char c : text) {
        if (c != ' ' && c != '\t' && c != '\n' && c != '\r' && c != '\f' && c != '\v') {
            return false;
        }
    }
    return true;
}

} // namespace ragaudit::util
