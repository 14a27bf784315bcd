#include "medal/core/jsonl.hpp"

#include <json.hpp>

#include "medal/util/errors.hpp"
#include "medal/util/io.hpp"

namespace medal::core {
namespace {

using ojson = nlohmann::ordered_json;

// --- helpers ---------------------------------------------------------------

const ojson& need(const ojson& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(key, std::string("missing key: ") + key);
    return *it;
}

std::string need_string(const ojson& obj, const char* key) {
    const ojson& v = need(obj, key);
    if (!v.is_string()) throw SchemaError(key, std::string(key) + " must be a string");
    return v.get<std::string>();
}

std::int64_t need_int(const ojson& obj, const char* key) {
    const ojson& v = need(obj, key);
    if (!v.is_number_integer() && !v.is_number_unsigned())
        throw SchemaError(key, std::string(key) + " must be an integer");
    return v.get<std::int64_t>();
}

void check_keys(const ojson& obj, std::initializer_list<const char*> allowed,
                const ParseOptions& opts, const char* where) {
    if (!opts.strict_keys) return;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) { ok = true; break; }
        if (!ok)
            throw SchemaError(it.key(), std::string("unknown key '") + it.key() + "' in " + where);
    }
}

void check_schema_version(const ojson& obj) {
    std::int64_t v = need_int(obj, "schema_version");
    if (v != kSchemaVersion)
        throw SchemaError("schema_version",
                          "unsupported schema_version " + std::to_string(v));
}

ojson parse_object(const std::string& line) {
    ojson obj;
    try {
        obj = ojson::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("", std::string("malformed JSON: ") + e.what());
    }
    if (!obj.is_object()) throw SchemaError("", "record is not a JSON object");
    return obj;
}

void check_language(const LanguageTag& tag, const ParseOptions& opts) {
    if (tag.code.empty()) throw SchemaError("language", "language must be non-empty");
    if (!is_known_language(tag.code) && !opts.allow_extra_languages)
        throw SchemaError("language", "unknown language tag '" + tag.code +
                                          "' (set allow_extra_languages to accept)");
}

// --- seed context ----------------------------------------------------------

ojson seed_to_json(const SeedContext& seed) {
    ojson j;
    j["scene_id"] = seed.scene_id;
    j["persona_id"] = seed.persona_id;
    j["language"] = seed.language.code;
    j["country"] = seed.country;
    j["scene_text"] = seed.scene_text;
    j["persona_text"] = seed.persona_text;
    j["affective_state"] = ojson{{"label", seed.affective_state.label},
                                 {"quadrant", seed.affective_state.quadrant}};
    j["gender_hint"] = std::string(gender_hint_name(seed.gender_hint));
    return j;
}

SeedContext seed_from_json(const ojson& j, const ParseOptions& opts, bool top_level) {
    if (top_level) check_schema_version(j);
    check_keys(j,
               top_level
                   ? std::initializer_list<const char*>{"schema_version", "scene_id", "persona_id",
                                                        "language", "country", "scene_text",
                                                        "persona_text", "affective_state",
                                                        "gender_hint"}
                   : std::initializer_list<const char*>{"scene_id", "persona_id", "language",
                                                        "country", "scene_text", "persona_text",
                                                        "affective_state", "gender_hint"},
               opts, "seed context");
    SeedContext seed;
    seed.scene_id = need_string(j, "scene_id");
    seed.persona_id = need_string(j, "persona_id");
    seed.language.code = need_string(j, "language");
    check_language(seed.language, opts);
    seed.country = need_string(j, "country");
    seed.scene_text = need_string(j, "scene_text");
    seed.persona_text = need_string(j, "persona_text");
    const ojson& affect = need(j, "affective_state");
    if (!affect.is_object()) throw SchemaError("affective_state", "affective_state must be an object");
    check_keys(affect, {"label", "quadrant"}, opts, "affective_state");
    seed.affective_state.label = need_string(affect, "label");
    seed.affective_state.quadrant = static_cast<int>(need_int(affect, "quadrant"));
    auto gender = gender_hint_from_name(need_string(j, "gender_hint"));
    if (!gender) throw SchemaError("gender_hint", "gender_hint must be male, female, or none");
    seed.gender_hint = *gender;
    validate(seed);
    return seed;
}

// --- dialogue ---------------------------------------------------------------

ojson turn_to_json(const Turn& turn) {
    ojson j;
    j["role"] = turn.role == Role::user ? "user" : "chatbot";
    j["text"] = turn.text;
    if (turn.role == Role::user) {
        j["attempt_count"] = turn.attempt_count;
        j["judge_feedback_trail"] = turn.judge_feedback_trail;
    }
    return j;
}

Turn turn_from_json(const ojson& j, const ParseOptions& opts) {
    Turn turn;
    std::string role = need_string(j, "role");
    if (role == "user")
        turn.role = Role::user;
    else if (role == "chatbot")
        turn.role = Role::chatbot;
    else
        throw SchemaError("role", "role must be user or chatbot");
    turn.text = need_string(j, "text");
    if (turn.role == Role::user) {
        check_keys(j, {"role", "text", "attempt_count", "judge_feedback_trail"}, opts, "turn");
        turn.attempt_count = static_cast<int>(need_int(j, "attempt_count"));
        const ojson& trail = need(j, "judge_feedback_trail");
        if (!trail.is_array())
            throw SchemaError("judge_feedback_trail", "judge_feedback_trail must be an array");
        for (const auto& item : trail) {
            if (!item.is_string())
                throw SchemaError("judge_feedback_trail", "feedback entries must be strings");
            turn.judge_feedback_trail.push_back(item.get<std::string>());
        }
    } else {
        check_keys(j, {"role", "text"}, opts, "turn");
    }
    return turn;
}

}  // namespace

std::string serialize(const SeedContext& seed) {
    validate(seed);
    ojson j;
    j["schema_version"] = kSchemaVersion;
    for (auto& [key, value] : seed_to_json(seed).items()) j[key] = value;
    return j.dump() + "\n";
}

SeedContext parse_seed_context(const std::string& line, const ParseOptions& opts) {
    return seed_from_json(parse_object(line), opts, /*top_level=*/true);
}

std::string serialize(const Dialogue& dialogue) {
    validate(dialogue, /*max_user_turns=*/10);
    ojson j;
    j["schema_version"] = kSchemaVersion;
    j["dialogue_id"] = dialogue.dialogue_id;
    j["user_model"] = dialogue.user_model;
    j["chatbot_model"] = dialogue.chatbot_model;
    j["judge_model"] = dialogue.judge_model;
    j["rng_seed"] = dialogue.rng_seed;
    j["termination"] = std::string(termination_name(dialogue.termination));
    j["seed"] = seed_to_json(dialogue.seed);
    ojson turns = ojson::array();
    for (const Turn& t : dialogue.turns) turns.push_back(turn_to_json(t));
    j["turns"] = std::move(turns);
    return j.dump() + "\n";
}

Dialogue parse_dialogue(const std::string& line, const ParseOptions& opts) {
    ojson j = parse_object(line);
    check_schema_version(j);
    check_keys(j,
               {"schema_version", "dialogue_id", "user_model", "chatbot_model", "judge_model",
                "rng_seed", "termination", "seed", "turns"},
               opts, "dialogue");
    Dialogue d;
    d.dialogue_id = need_string(j, "dialogue_id");
    d.user_model = need_string(j, "user_model");
    d.chatbot_model = need_string(j, "chatbot_model");
    d.judge_model = need_string(j, "judge_model");
    const ojson& seedv = need(j, "rng_seed");
    if (!seedv.is_number_integer() && !seedv.is_number_unsigned())
        throw SchemaError("rng_seed", "rng_seed must be an integer");
    d.rng_seed = seedv.get<std::uint64_t>();
    auto term = termination_from_name(need_string(j, "termination"));
    if (!term) throw SchemaError("termination", "unknown termination value");
    d.termination = *term;
    d.seed = seed_from_json(need(j, "seed"), opts, /*top_level=*/false);
    const ojson& turns = need(j, "turns");
    if (!turns.is_array()) throw SchemaError("turns", "turns must be an array");
    for (const auto& t : turns) d.turns.push_back(turn_from_json(t, opts));
    validate(d, opts.max_user_turns);
    return d;
}

namespace {

ojson verdict_to_json(const LabelVerdict& v) {
    ojson j;
    j["flag"] = v.flag;
    if (v.comment) j["comment"] = *v.comment;
    return j;
}

LabelVerdict verdict_from_json(const ojson& j, const char* name, const ParseOptions& opts) {
    if (!j.is_object()) throw SchemaError(name, std::string(name) + " must be an object");
    check_keys(j, {"flag", "comment"}, opts, name);
    LabelVerdict v;
    const ojson& flag = need(j, "flag");
    if (!flag.is_number_integer() && !flag.is_number_unsigned())
        throw SchemaError(name, "flag must be 0 or 1");
    std::int64_t f = flag.get<std::int64_t>();
    if (f != 0 && f != 1) throw SchemaError(name, "flag must be 0 or 1");
    v.flag = static_cast<int>(f);
    if (auto it = j.find("comment"); it != j.end()) {
        if (!it->is_string()) throw SchemaError(name, "comment must be a string");
        v.comment = it->get<std::string>();
    }
    return v;
}

ojson assessment_to_json(const DialogueAssessment& a) {
    ojson j;
    j["dialogue_id"] = a.dialogue_id;
    j["judge_model"] = a.judge_model;
    j["run_index"] = a.run_index;
    ojson labels;
    for (int i = 0; i < kIssueCount; ++i) labels[issue_names()[i]] = verdict_to_json(a.labels[i]);
    j["labels"] = std::move(labels);
    j["other"] = verdict_to_json(a.other);
    j["overall"] = a.overall;
    j["overall_comment"] = a.overall_comment;
    return j;
}

DialogueAssessment assessment_from_json(const ojson& j, const ParseOptions& opts,
                                        bool top_level) {
    if (top_level) check_schema_version(j);
    check_keys(j,
               top_level ? std::initializer_list<const char*>{"schema_version", "dialogue_id",
                                                              "judge_model", "run_index", "labels",
                                                              "other", "overall", "overall_comment"}
                         : std::initializer_list<const char*>{"dialogue_id", "judge_model",
                                                              "run_index", "labels", "other",
                                                              "overall", "overall_comment"},
               opts, "assessment");
    DialogueAssessment a;
    a.dialogue_id = need_string(j, "dialogue_id");
    a.judge_model = need_string(j, "judge_model");
    a.run_index = static_cast<int>(need_int(j, "run_index"));
    const ojson& labels = need(j, "labels");
    if (!labels.is_object()) throw SchemaError("labels", "labels must be an object");
    if (opts.strict_keys)
        for (auto it = labels.begin(); it != labels.end(); ++it)
            if (!issue_from_name(it.key()))
                throw SchemaError(it.key(), "unknown issue label '" + it.key() + "'");
    for (int i = 0; i < kIssueCount; ++i) {
        const std::string& name = issue_names()[i];
        auto it = labels.find(name);
        if (it == labels.end()) throw SchemaError(name, "missing issue label " + name);
        a.labels[i] = verdict_from_json(*it, name.c_str(), opts);
    }
    a.other = verdict_from_json(need(j, "other"), "other", opts);
    a.overall = static_cast<int>(need_int(j, "overall"));
    a.overall_comment = need_string(j, "overall_comment");
    validate(a);
    return a;
}

}  // namespace

std::string serialize(const DialogueAssessment& assessment) {
    validate(assessment);
    ojson j;
    j["schema_version"] = kSchemaVersion;
    for (auto& [key, value] : assessment_to_json(assessment).items()) j[key] = value;
    return j.dump() + "\n";
}

DialogueAssessment parse_assessment_record(const std::string& line, const ParseOptions& opts) {
    return assessment_from_json(parse_object(line), opts, /*top_level=*/true);
}

std::string serialize(const AnnotationRecord& record) {
    validate(record);
    ojson j;
    j["schema_version"] = kSchemaVersion;
    j["dialogue_id"] = record.dialogue_id;
    j["annotator_id"] = record.annotator_id;
    ojson labels;
    for (int i = 0; i < kIssueCount; ++i) labels[issue_names()[i]] = record.labels[i];
    j["labels"] = std::move(labels);
    j["overall"] = record.overall;
    if (record.user_humanlikeness) j["user_humanlikeness"] = *record.user_humanlikeness;
    return j.dump() + "\n";
}

AnnotationRecord parse_annotation_record(const std::string& line, const ParseOptions& opts) {
    ojson j = parse_object(line);
    check_schema_version(j);
    check_keys(j,
               {"schema_version", "dialogue_id", "annotator_id", "labels", "overall",
                "user_humanlikeness"},
               opts, "annotation");
    AnnotationRecord r;
    r.dialogue_id = need_string(j, "dialogue_id");
    r.annotator_id = need_string(j, "annotator_id");
    const ojson& labels = need(j, "labels");
    if (!labels.is_object()) throw SchemaError("labels", "labels must be an object");
    for (int i = 0; i < kIssueCount; ++i) {
        const std::string& name = issue_names()[i];
        auto it = labels.find(name);
        if (it == labels.end()) throw SchemaError(name, "missing issue label " + name);
        if (!it->is_number_integer() && !it->is_number_unsigned())
            throw SchemaError(name, "flag must be 0 or 1");
        std::int64_t f = it->get<std::int64_t>();
        if (f != 0 && f != 1) throw SchemaError(name, "flag must be 0 or 1");
        r.labels[i] = static_cast<int>(f);
    }
    r.overall = static_cast<int>(need_int(j, "overall"));
    if (auto it = j.find("user_humanlikeness"); it != j.end())
        r.user_humanlikeness = static_cast<int>(it->get<std::int64_t>());
    validate(r);
    return r;
}

std::string serialize(const BenchmarkEntry& entry) {
    validate(entry);
    ojson j;
    j["schema_version"] = kSchemaVersion;
    j["dialogue_id"] = entry.dialogue_id;
    j["language"] = entry.language.code;
    j["chatbot_model"] = entry.chatbot_model;
    j["user_model"] = entry.user_model;
    j["seeded_no_issue"] = entry.seeded_no_issue;
    j["source_assessment"] = assessment_to_json(entry.source_assessment);
    return j.dump() + "\n";
}

BenchmarkEntry parse_benchmark_entry(const std::string& line, const ParseOptions& opts) {
    ojson j = parse_object(line);
    check_schema_version(j);
    check_keys(j,
               {"schema_version", "dialogue_id", "language", "chatbot_model", "user_model",
                "seeded_no_issue", "source_assessment"},
               opts, "benchmark entry");
    BenchmarkEntry e;
    e.dialogue_id = need_string(j, "dialogue_id");
    e.language.code = need_string(j, "language");
    check_language(e.language, opts);
    e.chatbot_model = need_string(j, "chatbot_model");
    e.user_model = need_string(j, "user_model");
    const ojson& seeded = need(j, "seeded_no_issue");
    if (!seeded.is_boolean()) throw SchemaError("seeded_no_issue", "seeded_no_issue must be a boolean");
    e.seeded_no_issue = seeded.get<bool>();
    e.source_assessment = assessment_from_json(need(j, "source_assessment"), opts,
                                               /*top_level=*/false);
    validate(e);
    return e;
}

namespace {

template <typename Record, typename Parser>
std::vector<Record> read_records(const std::filesystem::path& path, const ParseOptions& opts,
                                 Parser parser) {
    std::vector<Record> records;
    for_each_line(path, [&](std::size_t lineno, const std::string& line) {
        try {
            records.push_back(parser(line, opts));
        } catch (const SchemaError& e) {
            throw SchemaError(e.field(), path.string() + ":" + std::to_string(lineno) + ": " +
                                             e.what());
        }
    });
    return records;
}

}  // namespace

std::vector<SeedContext> read_seed_contexts(const std::filesystem::path& path,
                                            const ParseOptions& opts) {
    return read_records<SeedContext>(path, opts, parse_seed_context);
}

std::vector<Dialogue> read_dialogues(const std::filesystem::path& path, const ParseOptions& opts) {
    return read_records<Dialogue>(path, opts, parse_dialogue);
}

std::vector<DialogueAssessment> read_assessments(const std::filesystem::path& path,
                                                 const ParseOptions& opts) {
    return read_records<DialogueAssessment>(path, opts, parse_assessment_record);
}

std::vector<AnnotationRecord> read_annotations(const std::filesystem::path& path,
                                               const ParseOptions& opts) {
    return read_records<AnnotationRecord>(path, opts, parse_annotation_record);
}

std::vector<BenchmarkEntry> read_benchmark(const std::filesystem::path& path,
                                           const ParseOptions& opts) {
    return read_records<BenchmarkEntry>(path, opts, parse_benchmark_entry);
}

}  // namespace medal::core
