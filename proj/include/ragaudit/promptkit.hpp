#pragma once

#include "ragaudit/tokenizer.hpp"
#include "ragaudit/vectorstore.hpp"

#include <string>
#include <vector>

namespace ragaudit {

enum class TemplateId { GuidedV1, BlindV1 };

const char* template_name(TemplateId id); // "GUIDED_V1" / "BLIND_V1"

// The whole prompt is sent as a single user-role message.
const std::string& guided_template();
const std::string& blind_template();

struct GuidedPromptInputs {
    std::vector<RetrievalHit> context_chunks; // rank order; text in metadata["text"]
    std::string question;                     // contract source under audit
    std::string vulnerability_type;
    std::string vulnerability_description;
};

struct BlindPromptInputs {
    std::vector<RetrievalHit> context_chunks;
    std::string question;
};

struct AssembledPrompt {
    std::string text;
    std::size_t token_count = 0;
    bool truncated = false;
    TemplateId template_id = TemplateId::GuidedV1;
    // Byte offset of the question within text. Both templates end with the
    // question, which is what makes tail truncation safe.
    std::size_t question_offset = 0;
};

// Concatenates hit texts in rank order, each preceded by a greppable
// delimiter line "----- RETRIEVED #<rank> (id=..., score=...) -----".
// Empty input yields the empty string.
std::string format_context(const std::vector<RetrievalHit>& hits);

AssembledPrompt render_guided(const GuidedPromptInputs& inputs,
                              const Tokenizer& tokenizer = default_tokenizer());
AssembledPrompt render_blind(const BlindPromptInputs& inputs,
                             const Tokenizer& tokenizer = default_tokenizer());

// Naive tail truncation: when the prompt exceeds the budget, tokens are
// removed from the end of the question only; instructions and retrieved
// context stay intact. Throws BudgetTooSmall when even an empty question
// cannot fit. Idempotent.
AssembledPrompt fit_to_budget(const AssembledPrompt& prompt, std::size_t budget_tokens,
                              const Tokenizer& tokenizer = default_tokenizer());

inline constexpr std::size_t kDefaultTokenBudget = 128000;

} // namespace ragaudit
