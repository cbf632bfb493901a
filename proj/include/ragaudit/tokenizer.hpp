#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ragaudit {

using TokenId = std::int32_t;

struct TokenSequence {
    std::vector<TokenId> tokens;
    std::string tokenizer_id;

    std::size_t size() const { return tokens.size(); }
};

// Reversible tokenizer interface. Implementations must guarantee
// decode(encode(text)) == text byte-exactly for arbitrary input, and must
// accept any byte string (Solidity sources are not always clean UTF-8).
class Tokenizer {
public:
    virtual ~Tokenizer() = default;

    virtual const std::string& id() const = 0;
    virtual std::vector<TokenId> encode(std::string_view text) const = 0;
    // Throws InvalidTokenId for ids outside the vocabulary.
    virtual std::string decode(std::span<const TokenId> tokens) const = 0;

    std::size_t count(std::string_view text) const { return encode(text).size(); }
};

// Default tokenizer: one token per Unicode scalar value, strict UTF-8.
//
// Token ids:
//   [0, 0x10FFFF]            valid code point (shortest-form UTF-8 only)
//   [0x110000, 0x1100FF]     raw byte that is not part of a valid sequence
//
// Invalid sequences (overlong forms, surrogates, stray continuation bytes)
// are consumed one byte at a time as raw-byte tokens, so decoding re-emits
// the original bytes unchanged. Tokens always align to character
// boundaries, so chunk boundaries never split a multi-byte character.
class Utf8Tokenizer final : public Tokenizer {
public:
    static constexpr TokenId kByteBase = 0x110000;
    static constexpr TokenId kVocabEnd = kByteBase + 256;

    const std::string& id() const override { return id_; }
    std::vector<TokenId> encode(std::string_view text) const override;
    std::string decode(std::span<const TokenId> tokens) const override;

private:
    std::string id_ = "utf8-cp/1";
};

const Tokenizer& default_tokenizer();

TokenSequence tokenize(std::string_view text, const Tokenizer& tokenizer);
// Throws TokenizerMismatch when the sequence was produced by a different
// tokenizer than the one given.
std::string detokenize(const TokenSequence& sequence, const Tokenizer& tokenizer);

} // namespace ragaudit
