#include "ragaudit/tokenizer.hpp"

#include "ragaudit/errors.hpp"

namespace ragaudit {

namespace {

constexpr bool is_continuation(unsigned char b) {
    return (b & 0xc0) == 0x80;
}

// Decodes one strict UTF-8 sequence starting at text[pos]. Returns the code
// point and advances pos, or returns -1 without advancing when the bytes at
// pos do not form a valid shortest-form sequence.
std::int32_t decode_one(std::string_view text, std::size_t& pos) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(text.data());
    const std::size_t n = text.size();
    const unsigned char b0 = bytes[pos];

    if (b0 < 0x80) {
        pos += 1;
        return b0;
    }
    if (b0 >= 0xc2 && b0 <= 0xdf) {
        if (pos + 1 >= n || !is_continuation(bytes[pos + 1])) return -1;
        const std::int32_t cp = ((b0 & 0x1f) << 6) | (bytes[pos + 1] & 0x3f);
        pos += 2;
        return cp;
    }
    if (b0 >= 0xe0 && b0 <= 0xef) {
        if (pos + 2 >= n) return -1;
        const unsigned char b1 = bytes[pos + 1];
        const unsigned char b2 = bytes[pos + 2];
        const unsigned char lo = (b0 == 0xe0) ? 0xa0 : 0x80;
        const unsigned char hi = (b0 == 0xed) ? 0x9f : 0xbf; // 0xed range excludes surrogates
        if (b1 < lo || b1 > hi || !is_continuation(b2)) return -1;
        const std::int32_t cp = ((b0 & 0x0f) << 12) | ((b1 & 0x3f) << 6) | (b2 & 0x3f);
        pos += 3;
        return cp;
    }
    if (b0 >= 0xf0 && b0 <= 0xf4) {
        if (pos + 3 >= n) return -1;
        const unsigned char b1 = bytes[pos + 1];
        const unsigned char b2 = bytes[pos + 2];
        const unsigned char b3 = bytes[pos + 3];
        const unsigned char lo = (b0 == 0xf0) ? 0x90 : 0x80;
        const unsigned char hi = (b0 == 0xf4) ? 0x8f : 0xbf; // cap at U+10FFFF
        if (b1 < lo || b1 > hi || !is_continuation(b2) || !is_continuation(b3)) return -1;
        const std::int32_t cp =
            ((b0 & 0x07) << 18) | ((b1 & 0x3f) << 12) | ((b2 & 0x3f) << 6) | (b3 & 0x3f);
        pos += 4;
        return cp;
    }
    return -1;
}

void append_utf8(std::string& out, std::int32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else {
        out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    }
}

} // namespace

std::vector<TokenId> Utf8Tokenizer::encode(std::string_view text) const {
    std::vector<TokenId> tokens;
    tokens.reserve(text.size());
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::int32_t cp = decode_one(text, pos);
        if (cp >= 0) {
            tokens.push_back(cp);
        } else {
            tokens.push_back(kByteBase + static_cast<unsigned char>(text[pos]));
            pos += 1;
        }
    }
    return tokens;
}

std::string Utf8Tokenizer::decode(std::span<const TokenId> tokens) const {
    std::string out;
    out.reserve(tokens.size());
    for (TokenId t : tokens) {
        if (t >= 0 && t < kByteBase) {
            if (t >= 0xd800 && t <= 0xdfff) {
                raise(Errc::InvalidTokenId, "surrogate token id " + std::to_string(t));
            }
            append_utf8(out, t);
        } else if (t >= kByteBase && t < kVocabEnd) {
            out.push_back(static_cast<char>(t - kByteBase));
        } else {
            raise(Errc::InvalidTokenId, "token id " + std::to_string(t) + " outside vocabulary");
        }
    }
    return out;
}

const Tokenizer& default_tokenizer() {
    static const Utf8Tokenizer instance;
    return instance;
}

TokenSequence tokenize(std::string_view text, const Tokenizer& tokenizer) {
    return TokenSequence{tokenizer.encode(text), tokenizer.id()};
}

std::string detokenize(const TokenSequence& sequence, const Tokenizer& tokenizer) {
    if (sequence.tokenizer_id != tokenizer.id()) {
        raise(Errc::TokenizerMismatch,
              "sequence from '" + sequence.tokenizer_id + "', active tokenizer is '" +
                  tokenizer.id() + "'");
    }
    return tokenizer.decode(sequence.tokens);
}

} // namespace ragaudit
