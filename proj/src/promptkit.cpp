#include "ragaudit/promptkit.hpp"

#include "ragaudit/errors.hpp"
#include "ragaudit/util.hpp"

#include <map>

namespace ragaudit {

namespace {

// Kept byte-identical to templates/guided_v1.txt; the unit tests compare
// against the checked-in file, so any edit here must update both (and a new
// wording belongs under a new TemplateId).
const std::string kGuidedV1 =
    R"TPL(You are an AI Smart Contract auditor agent in a RAG system.
We have performed a vector search of known smart contract
vulnerabilities based on the code in the USER QUESTION.
The results are below:

RELEVANT_VULNERABILITIES: {context}

With this knowledge, review the following smart contract code
in USER QUESTION in detail and very thoroughly.
ONLY indentify vulnerabilities in the USER QUESTION, do not
analyze the RELEVANT_VULNERABILITIES.

Think step by step, carefully.
Is the following smart contract vulnerable to '{vulnerability_type}' attacks?
Reply with YES or NO only. Do not be verbose.
Think carefully but only answer with YES or NO! To help you,
find here a definition of a '{vulnerability_type}' attack: {vulnerability_description}

USER QUESTION: {question})TPL";

// Same framing with the vulnerability-specific sentences replaced by a
// generic binary question; kept byte-identical to templates/blind_v1.txt.
const std::string kBlindV1 =
    R"TPL(You are an AI Smart Contract auditor agent in a RAG system.
We have performed a vector search of known smart contract
vulnerabilities based on the code in the USER QUESTION.
The results are below:

RELEVANT_VULNERABILITIES: {context}

With this knowledge, review the following smart contract code
in USER QUESTION in detail and very thoroughly.
ONLY indentify vulnerabilities in the USER QUESTION, do not
analyze the RELEVANT_VULNERABILITIES.

Think step by step, carefully.
Is the following smart contract vulnerable to any attack?
Reply with YES or NO only. Do not be verbose.
Think carefully but only answer with YES or NO!

USER QUESTION: {question})TPL";

// Single left-to-right pass: substituted values are never re-scanned, so
// placeholder-looking content inside a contract cannot expand.
std::string render_template(const std::string& tmpl,
                            const std::map<std::string, std::string>& values) {
    std::string out;
    out.reserve(tmpl.size());
    std::size_t pos = 0;
    while (pos < tmpl.size()) {
        const std::size_t brace = tmpl.find('{', pos);
        if (brace == std::string::npos) {
            out.append(tmpl, pos, tmpl.size() - pos);
            break;
        }
        out.append(tmpl, pos, brace - pos);
        const std::size_t close = tmpl.find('}', brace);
        bool replaced = false;
        if (close != std::string::npos) {
            const std::string name = tmpl.substr(brace + 1, close - brace - 1);
            if (auto found = values.find(name); found != values.end()) {
                out += found->second;
                pos = close + 1;
                replaced = true;
            }
        }
        if (!replaced) {
            out.push_back('{');
            pos = brace + 1;
        }
    }
    return out;
}

std::string hit_text(const RetrievalHit& hit) {
    if (hit.metadata.is_object() && hit.metadata.contains("text") &&
        hit.metadata["text"].is_string()) {
        return hit.metadata["text"].get<std::string>();
    }
    return "";
}

AssembledPrompt assemble(const std::string& tmpl, TemplateId id,
                         std::map<std::string, std::string> values, const std::string& question,
                         const Tokenizer& tokenizer) {
    values.emplace("question", question);
    AssembledPrompt prompt;
    prompt.template_id = id;
    prompt.text = render_template(tmpl, values);
    prompt.token_count = tokenizer.count(prompt.text);
    // Both templates end with "USER QUESTION: {question}".
    prompt.question_offset = prompt.text.size() - question.size();
    return prompt;
}

} // namespace

const char* template_name(TemplateId id) {
    switch (id) {
        case TemplateId::GuidedV1: return "GUIDED_V1";
        case TemplateId::BlindV1: return "BLIND_V1";
    }
    return "GUIDED_V1";
}

const std::string& guided_template() { return kGuidedV1; }
const std::string& blind_template() { return kBlindV1; }

std::string format_context(const std::vector<RetrievalHit>& hits) {
    std::string out;
    for (std::size_t i = 0; i < hits.size(); ++i) {
        out += "----- RETRIEVED #" + std::to_string(i + 1) + " (id=" + hits[i].id +
               ", score=" + util::format_fixed(hits[i].score, 4) + ") -----\n";
        out += hit_text(hits[i]);
        out += "\n";
    }
    return out;
}

AssembledPrompt render_guided(const GuidedPromptInputs& inputs, const Tokenizer& tokenizer) {
    if (inputs.vulnerability_type.empty()) {
        raise(Errc::MissingField, "guided prompt requires vulnerability_type");
    }
    if (inputs.vulnerability_description.empty()) {
        raise(Errc::MissingField, "guided prompt requires vulnerability_description");
    }
    return assemble(kGuidedV1, TemplateId::GuidedV1,
                    {{"context", format_context(inputs.context_chunks)},
                     {"vulnerability_type", inputs.vulnerability_type},
                     {"vulnerability_description", inputs.vulnerability_description}},
                    inputs.question, tokenizer);
}

AssembledPrompt render_blind(const BlindPromptInputs& inputs, const Tokenizer& tokenizer) {
    if (inputs.question.empty()) {
        raise(Errc::MissingField, "blind prompt requires a question");
    }
    return assemble(kBlindV1, TemplateId::BlindV1,
                    {{"context", format_context(inputs.context_chunks)}}, inputs.question,
                    tokenizer);
}

AssembledPrompt fit_to_budget(const AssembledPrompt& prompt, std::size_t budget_tokens,
                              const Tokenizer& tokenizer) {
    if (prompt.token_count <= budget_tokens) {
        return prompt;
    }
    const std::string head = prompt.text.substr(0, prompt.question_offset);
    const std::string question = prompt.text.substr(prompt.question_offset);
    const std::size_t head_tokens = tokenizer.count(head);
    if (head_tokens > budget_tokens) {
        raise(Errc::BudgetTooSmall, "prompt without question needs " + std::to_string(head_tokens) +
                                        " tokens, budget is " + std::to_string(budget_tokens));
    }

    const std::vector<TokenId> question_tokens = tokenizer.encode(question);
    std::size_t keep = budget_tokens - head_tokens;

    AssembledPrompt fitted = prompt;
    fitted.truncated = true;
    for (;;) {
        fitted.text = head + tokenizer.decode(std::span<const TokenId>(question_tokens.data(), keep));
        fitted.token_count = tokenizer.count(fitted.text);
        if (fitted.token_count <= budget_tokens || keep == 0) {
            break;
        }
        --keep; // non-additive tokenizers may need an extra step
    }
    return fitted;
}

} // namespace ragaudit
