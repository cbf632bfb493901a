#pragma once

#include <stdexcept>
#include <string>

namespace ragaudit {

enum class Errc {
    // corpus
    MissingRoot,
    MalformedLabelMap,
    AlreadySplit,
    FractionOutOfRange,
    MalformedCatalog,
    DuplicateTypeName,
    // tokenizer
    TokenizerMismatch,
    InvalidTokenId,
    // embeddings
    ProviderUnavailable,
    DimensionMismatch,
    EmptyText,
    // vectorstore
    ZeroVector,
    CorruptIndex,
    VersionMismatch,
    // promptkit
    MissingField,
    BudgetTooSmall,
    // llmclient
    ContextOverflow,
    AuthFailure,
    ScriptExhausted,
    // audit
    TrialFailed,
    // eval
    KeyMismatch,
    MissingExpectation,
    DuplicateExpectation,
    WriteFailure,
    // generic
    IoError,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
    throw Error(code, message);
}

} // namespace ragaudit
