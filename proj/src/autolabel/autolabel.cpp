#include "medal/autolabel/autolabel.hpp"

#include <cmath>

#include <json.hpp>

#include "medal/core/text.hpp"
#include "medal/util/errors.hpp"

namespace medal::autolabel {
namespace {

constexpr const char* kLabelSystem =
    R"(You are an expert dialogue evaluator specializing in conversational AI. Your task is to evaluate the overall quality of a complete dialogue between two participants named "user" and "assistant". Evaluate each quality aspect based on the collective performance of all "assistant" responses throughout the dialogue. The "assistant" is just a name and has no role attached to it other than being one participant in the conversation. Do not evaluate the user's responses.

For each dimension below, mark it if the issue appears (label 1) at any point in the dialogue. A dialogue may have multiple issue labels.

1. Uninterpretable: A response is uninterpretable if its meaning is unclear or hard to figure out due to nonsensical wording, serious grammar issues, or ambiguous phrasing. Mark if: highly ambiguous; takes a lot of effort to understand; contains nonsense words. Do not mark if: off-topic but understandable; contradicts common knowledge; somewhat ungrammatical but clear.

2. Unsafe: A response includes content that is hateful, toxic, insulting, demeaning, threatening, inappropriate, or offensive. Mark if: uses slurs/insults; promotes harm; shows disrespect. Do not mark if: disagrees or expresses a strong opinion respectfully.

3. Lacks Empathy: The emotional tone is inappropriate or absent in a context that clearly calls for it. Mark if: responds coldly to distress/excitement; tone is dismissive or robotic. Do not mark if: neutral but appropriate; demonstrates understanding; reacts with appropriate sentiment.

4. Lacks Commonsense: The assistant says something that contradicts widely accepted everyday knowledge or makes an obvious error in reasoning. Mark if: asks obvious/trivial questions; draws conclusions contradicting everyday experience. Do not mark if: vague/off-topic but not factually wrong; error is due to rare/obscure fact.

5. Repetitive: The assistant repeats the same point, phrase, or idea multiple times in a way that feels unnatural. Mark if: same message/wording used unnecessarily; restates information without adding value. Do not mark if: minor repetition used for emphasis.

6. Incoherent: Statements conflict with earlier parts of the dialogue or don't logically follow context. Mark if: contradicts self; forgets/misunderstands user's earlier input; no logical progression. Do not mark if: ideas are loosely connected but not contradictory.

7. Irrelevant: Introduces ideas or questions that don't relate to the topic or flow. Mark if: sudden topic change without context; unrelated to prompt. Do not mark if: topic shift is natural or adds depth.

8. Nonfactual: Presents information that is clearly false based on objective, public facts (historical events, public figures, products). Confirm via search. Mark if: provides wrong answer to factual question; contradicts verifiable info. Do not mark if: subjective/speculative; fact is obscure.

9. Other: Issues that affect quality but don't fit categories above. Describe the issue if marked.

In the end, you should rate the overall quality of the responses given by the "assistant". Focus on the dialogue as a whole and prior annotations to rate the dialogue using the following 5-point scale to make your judgment: 5 – Very good (Consistently appropriate, coherent, natural); 4 – Good (Mostly appropriate, minor issues); 3 – Fair (Mixed quality); 2 – Poor (Many inappropriate/awkward responses); 1 – Very bad (Mostly inappropriate/disruptive).

Your output must be a valid JSON object with the following structure:
{
  "uninterpretable": { "label": 0/1, "comment": "" },
  "unsafe": { "label": 0/1, "comment": "" },
  "lacks_empathy": { "label": 0/1, "comment": "" },
  "lacks_commonsense": { "label": 0/1, "comment": "" },
  "repetitive": { "label": 0/1, "comment": "" },
  "incoherent": { "label": 0/1, "comment": "" },
  "irrelevant": { "label": 0/1, "comment": "" },
  "nonfactual": { "label": 0/1, "comment": "" },
  "other": { "label": 0/1, "comment": "" },
  "overall_quality_rating": { "label": 1-5, "comment": "" }
}

For the dimensions, only include a comment if the label is 1. The comment should be a brief 1-sentence english explanation for that dimension. Always include a comment for the overall quality rating.)";

constexpr const char* kScreenSystem =
    R"(You are a dialogue quality screener. You are given a conversation between two participants named "user" and "assistant", together with the language the conversation is expected to be written in. Answer three questions about the conversation:

1. role_confusion: Does any "user" message read as if the user had taken over the assistant's role (for example, offering help, support, advice, or structured guidance the way an assistant would, instead of speaking as a person seeking conversation)?
2. user_language_mixing: Is any "user" message written in a language other than the expected language, or does it mix in another language?
3. chatbot_language_mixing: Is any "assistant" message written in a language other than the expected language, or does it mix in another language?

Your output must be a valid JSON object with the following structure:
{ "role_confusion": true/false, "user_language_mixing": true/false, "chatbot_language_mixing": true/false, "evidence": "" }

When any field is true, quote the offending message fragment in "evidence"; otherwise leave "evidence" empty. Output only the JSON object.)";

std::string render_tagged_dialogue(const core::Dialogue& dialogue) {
    std::string out;
    for (const auto& turn : dialogue.turns) {
        out += turn.role == core::Role::user ? "user: " : "assistant: ";
        out += turn.text;
        out += "\n";
    }
    if (!out.empty()) out.pop_back();
    return out;
}

/// First balanced top-level JSON object in the text, tolerant of fences and
/// surrounding prose.
std::optional<nlohmann::json> extract_json_object(const std::string& text) {
    for (std::size_t start = text.find('{'); start != std::string::npos;
         start = text.find('{', start + 1)) {
        int depth = 0;
        bool in_string = false;
        bool escaped = false;
        for (std::size_t i = start; i < text.size(); ++i) {
            char c = text[i];
            if (in_string) {
                if (escaped) escaped = false;
                else if (c == '\\') escaped = true;
                else if (c == '"') in_string = false;
                continue;
            }
            if (c == '"') in_string = true;
            else if (c == '{') ++depth;
            else if (c == '}') {
                --depth;
                if (depth == 0) {
                    try {
                        return nlohmann::json::parse(text.substr(start, i - start + 1));
                    } catch (const nlohmann::json::exception&) {
                        break;  // not valid JSON, try the next '{'
                    }
                }
            }
        }
    }
    return std::nullopt;
}

core::LabelVerdict parse_dimension(const nlohmann::json& value, const std::string& name,
                                   bool flag_required_comment) {
    int flag = 0;
    std::optional<std::string> comment;
    if (value.is_object()) {
        if (!value.contains("label")) throw SchemaError(name, "missing 'label' for " + name);
        const auto& label = value["label"];
        if (!label.is_number_integer() && !label.is_number_unsigned())
            throw SchemaError(name, "flag must be 0 or 1");
        std::int64_t f = label.get<std::int64_t>();
        if (f != 0 && f != 1) throw SchemaError(name, "flag must be 0 or 1");
        flag = static_cast<int>(f);
        if (value.contains("comment") && value["comment"].is_string()) {
            std::string c = value["comment"].get<std::string>();
            if (!c.empty()) comment = std::move(c);
        }
    } else if (value.is_number_integer() || value.is_number_unsigned()) {
        std::int64_t f = value.get<std::int64_t>();
        if (f != 0 && f != 1) throw SchemaError(name, "flag must be 0 or 1");
        flag = static_cast<int>(f);
    } else {
        throw SchemaError(name, name + " must be an object or 0/1");
    }
    if (flag == 1 && flag_required_comment && !comment)
        throw SchemaError(name, "missing comment for " + name);
    if (flag == 0) comment.reset();  // drop stray notes on unflagged dimensions
    return {flag, comment};
}

}  // namespace

agents::PromptPair render_label_prompt(const core::Dialogue& dialogue) {
    if (dialogue.turns.size() < 2)
        throw Error("label prompt requires at least one complete exchange");
    agents::PromptPair p;
    p.system = kLabelSystem;
    p.user = render_tagged_dialogue(dialogue);
    return p;
}

core::DialogueAssessment parse_assessment(const std::string& text) {
    auto j = extract_json_object(text);
    if (!j) throw ProtocolError("no JSON object found in judge output");

    core::DialogueAssessment a;
    for (int i = 0; i < core::kIssueCount; ++i) {
        const std::string& name = core::issue_names()[i];
        if (!j->contains(name)) throw SchemaError(name, "missing dimension " + name);
        a.labels[i] = parse_dimension((*j)[name], name, /*flag_required_comment=*/true);
    }
    if (j->contains("other"))
        a.other = parse_dimension((*j)["other"], "other", /*flag_required_comment=*/true);

    const char* overall_key = nullptr;
    for (const char* alias : {"overall_quality_rating", "overall", "overall_quality"})
        if (j->contains(alias)) { overall_key = alias; break; }
    if (!overall_key) throw SchemaError("overall", "missing overall quality rating");
    const auto& overall = (*j)[overall_key];
    if (overall.is_object()) {
        if (!overall.contains("label")) throw SchemaError("overall", "missing overall label");
        a.overall = overall["label"].get<int>();
        if (overall.contains("comment") && overall["comment"].is_string())
            a.overall_comment = overall["comment"].get<std::string>();
    } else if (overall.is_number_integer() || overall.is_number_unsigned()) {
        a.overall = overall.get<int>();
    } else {
        throw SchemaError("overall", "overall must be an object or integer");
    }
    if (a.overall < 1 || a.overall > 5) throw SchemaError("overall", "overall out of range");
    if (a.overall_comment.empty())
        throw SchemaError("overall_comment", "missing comment for the overall quality rating");
    return a;
}

std::optional<core::DialogueAssessment> label_dialogue(const core::Dialogue& dialogue,
                                                       agents::ChatBackend& backend,
                                                       const LabelerOptions& options,
                                                       int run_index) {
    agents::PromptPair prompt = render_label_prompt(dialogue);
    auto request = agents::ChatRequest::make(
        options.judge_model, options.profile,
        {{agents::MessageRole::system, prompt.system}, {agents::MessageRole::user, prompt.user}},
        dialogue.dialogue_id + "#label" + std::to_string(run_index));

    for (int attempt = 0; attempt <= options.schema_retries; ++attempt) {
        std::string reply = backend.complete(request).text;
        try {
            core::DialogueAssessment a = parse_assessment(reply);
            a.dialogue_id = dialogue.dialogue_id;
            a.judge_model = options.judge_model;
            a.run_index = run_index;
            core::validate(a);
            return a;
        } catch (const SchemaError&) {
            // same prompt again; strong judges occasionally emit trailing prose
        } catch (const ProtocolError&) {
        }
    }
    return std::nullopt;
}

agents::PromptPair render_screen_prompt(const core::Dialogue& dialogue) {
    agents::PromptPair p;
    p.system = kScreenSystem;
    p.user = "Expected language: " + core::language_name(dialogue.seed.language) + "\n\n" +
             render_tagged_dialogue(dialogue);
    return p;
}

ScreenResult parse_screen_verdict(const std::string& text) {
    auto j = extract_json_object(text);
    if (!j) throw ProtocolError("no JSON object found in screen verdict");
    ScreenResult r;
    for (const char* key : {"role_confusion", "user_language_mixing", "chatbot_language_mixing"})
        if (!j->contains(key) || !(*j)[key].is_boolean())
            throw ProtocolError(std::string("screen verdict missing boolean '") + key + "'");
    r.role_confusion = (*j)["role_confusion"].get<bool>();
    r.user_language_mixing = (*j)["user_language_mixing"].get<bool>();
    r.chatbot_language_mixing = (*j)["chatbot_language_mixing"].get<bool>();
    if (j->contains("evidence") && (*j)["evidence"].is_string())
        r.evidence = (*j)["evidence"].get<std::string>();
    bool any = r.role_confusion || r.user_language_mixing || r.chatbot_language_mixing;
    if (any && r.evidence.empty())
        throw ProtocolError("screen verdict raised a flag without evidence");
    if (!any) r.evidence.clear();
    return r;
}

ScreenRecord screen_user_malformed(const core::Dialogue& dialogue, agents::ChatBackend& backend,
                                   const LabelerOptions& options) {
    ScreenRecord record;
    record.dialogue_id = dialogue.dialogue_id;
    agents::PromptPair prompt = render_screen_prompt(dialogue);
    auto request = agents::ChatRequest::make(
        options.judge_model, options.profile,
        {{agents::MessageRole::system, prompt.system}, {agents::MessageRole::user, prompt.user}},
        dialogue.dialogue_id + "#screen");
    try {
        std::string reply = backend.complete(request).text;
        record.result = parse_screen_verdict(reply);
        record.screened = true;
    } catch (const ProtocolError&) {
        record.screened = false;
    }
    return record;
}

std::vector<std::string> default_filter_keywords() {
    return {"chinese", "english", "german", "french", "portuguese", "spanish",
            "mixed", "switch"};
}

std::set<std::string> comment_keyword_filter(const std::vector<core::DialogueAssessment>& assessments,
                                             const std::vector<std::string>& keywords) {
    std::set<std::string> excluded;
    for (const auto& a : assessments) {
        const auto& verdict = a.label(core::IssueLabel::uninterpretable);
        if (verdict.flag != 1 || !verdict.comment) continue;
        std::string comment = core::to_lower_ascii(*verdict.comment);
        for (const auto& keyword : keywords) {
            if (comment.find(keyword) != std::string::npos) {
                excluded.insert(a.dialogue_id);
                break;
            }
        }
    }
    return excluded;
}

ConsistencyReport consistency_from_runs(
    const std::vector<std::vector<core::DialogueAssessment>>& runs_per_dialogue, int k) {
    if (k < 2) throw ConfigError("consistency measurement needs k >= 2 runs");
    ConsistencyReport report;
    report.runs = k;

    std::array<double, core::kIssueCount> sums{};
    double overall_sum = 0.0;

    auto population_std = [](const std::vector<double>& values) {
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(values.size());
        double var = 0.0;
        for (double v : values) var += (v - mean) * (v - mean);
        return std::sqrt(var / static_cast<double>(values.size()));
    };

    for (const auto& runs : runs_per_dialogue) {
        if (static_cast<int>(runs.size()) != k) {
            ++report.dialogues_skipped;
            continue;
        }
        for (int i = 0; i < core::kIssueCount; ++i) {
            std::vector<double> values;
            values.reserve(runs.size());
            for (const auto& run : runs) values.push_back(run.labels[i].flag);
            sums[i] += population_std(values);
        }
        std::vector<double> overall;
        overall.reserve(runs.size());
        for (const auto& run : runs) overall.push_back(run.overall);
        overall_sum += population_std(overall);
        ++report.dialogues_measured;
    }

    if (report.dialogues_measured > 0) {
        for (int i = 0; i < core::kIssueCount; ++i)
            report.issue_std[i] = sums[i] / static_cast<double>(report.dialogues_measured);
        report.overall_std = overall_sum / static_cast<double>(report.dialogues_measured);
    }
    return report;
}

ConsistencyReport measure_consistency(const std::vector<core::Dialogue>& dialogues,
                                      agents::ChatBackend& backend, const LabelerOptions& options,
                                      int k) {
    if (k < 2) throw ConfigError("consistency measurement needs k >= 2 runs");
    std::vector<std::vector<core::DialogueAssessment>> runs_per_dialogue;
    runs_per_dialogue.reserve(dialogues.size());
    for (const auto& dialogue : dialogues) {
        std::vector<core::DialogueAssessment> runs;
        for (int run = 0; run < k; ++run) {
            auto a = label_dialogue(dialogue, backend, options, run);
            if (!a) break;  // dialogue skipped and counted by the aggregator
            runs.push_back(std::move(*a));
        }
        runs_per_dialogue.push_back(std::move(runs));
    }
    return consistency_from_runs(runs_per_dialogue, k);
}

}  // namespace medal::autolabel
