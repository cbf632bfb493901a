#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ragaudit::util {

// FNV-1a 64-bit. Stable across platforms; used for document checksums,
// prompt checksums and seeded hash derivations (not cryptographic).
inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ull;

constexpr std::uint64_t fnv1a64(std::string_view data, std::uint64_t state = kFnvOffset) {
    std::uint64_t h = state;
    for (unsigned char c : data) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

// Mixes an integer into an FNV state byte by byte (little-endian).
constexpr std::uint64_t fnv1a64_mix(std::uint64_t value, std::uint64_t state) {
    std::uint64_t h = state;
    for (int i = 0; i < 8; ++i) {
        h ^= (value >> (8 * i)) & 0xff;
        h *= kFnvPrime;
    }
    return h;
}

std::string to_hex(std::uint64_t value);

std::uint32_t crc32(std::string_view data);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);
std::vector<std::string> read_lines(const std::filesystem::path& path);

std::string iso8601_utc_now();

// Half-up rounding to one decimal place (for success percentages).
double round_half_up_1dp(double value);
// Half-up rounding to three decimal places (for overall rates).
double round_half_up_3dp(double value);

std::string format_fixed(double value, int decimals);

bool is_blank(std::string_view text);

} // namespace ragaudit::util
