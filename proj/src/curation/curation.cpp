#include "medal/curation/curation.hpp"

#include <algorithm>
#include <limits>

#include "medal/core/tsv.hpp"
#include "medal/util/errors.hpp"

namespace medal::curation {

void CurationTarget::check(std::size_t model_pairs) const {
    if (per_language_size < 1) throw ConfigError("per_language_size must be >= 1");
    if (static_cast<std::size_t>(per_language_size) < model_pairs)
        throw ConfigError("per_language_size " + std::to_string(per_language_size) +
                          " is smaller than the number of user x chatbot pairs (" +
                          std::to_string(model_pairs) + ")");
}

std::vector<PoolEntry> build_pool(const std::vector<core::Dialogue>& dialogues,
                                  const std::vector<core::DialogueAssessment>& assessments,
                                  const std::set<std::string>& excluded_ids) {
    std::map<std::string, const core::DialogueAssessment*> by_id;
    for (const auto& a : assessments) by_id.emplace(a.dialogue_id, &a);

    std::vector<PoolEntry> pool;
    for (const auto& d : dialogues) {
        if (excluded_ids.count(d.dialogue_id)) continue;
        auto it = by_id.find(d.dialogue_id);
        if (it == by_id.end()) continue;  // unlabelled dialogues never enter the pool
        PoolEntry entry;
        entry.dialogue_id = d.dialogue_id;
        entry.language = d.seed.language;
        entry.user_model = d.user_model;
        entry.chatbot_model = d.chatbot_model;
        entry.assessment = *it->second;
        pool.push_back(std::move(entry));
    }
    return pool;
}

namespace {

constexpr const char* kNoIssue = "no_issue";

// rotation order: the eight issues in canonical order, then no_issue
std::vector<std::string> rotation_kinds() {
    std::vector<std::string> kinds(core::issue_names().begin(), core::issue_names().end());
    kinds.push_back(kNoIssue);
    return kinds;
}

bool entry_has_kind(const PoolEntry& e, const std::string& kind) {
    if (kind == kNoIssue) return !e.assessment.has_any_issue();
    auto issue = core::issue_from_name(kind);
    return issue && e.assessment.label(*issue).flag == 1;
}

struct SelectionState {
    std::map<std::string, int> chatbot_counts;     // every chatbot pre-registered at 0
    std::array<int, 6> overall_histogram{};        // scores 2..5 balanced; 1 tracked only
    std::set<std::string> chosen;

    int range_chatbots() const {
        int lo = std::numeric_limits<int>::max(), hi = 0;
        for (const auto& [_, n] : chatbot_counts) {
            lo = std::min(lo, n);
            hi = std::max(hi, n);
        }
        return chatbot_counts.empty() ? 0 : hi - lo;
    }

    int min_chatbot_count() const {
        int lo = std::numeric_limits<int>::max();
        for (const auto& [_, n] : chatbot_counts) lo = std::min(lo, n);
        return chatbot_counts.empty() ? 0 : lo;
    }

    int range_histogram() const {
        int lo = std::numeric_limits<int>::max(), hi = 0;
        for (int score = 2; score <= 5; ++score) {
            lo = std::min(lo, overall_histogram[score]);
            hi = std::max(hi, overall_histogram[score]);
        }
        return hi - lo;
    }

    void add(const PoolEntry& e) {
        chatbot_counts[e.chatbot_model] += 1;
        overall_histogram[e.assessment.overall] += 1;
        chosen.insert(e.dialogue_id);
    }
};

/// J for the state that would result from adding the candidate, minus a
/// coverage bonus when the candidate's chatbot sits at the current minimum
/// count (this back-fills chatbots that stage 1 had to skip).
double objective_after(const SelectionState& state, const PoolEntry& candidate) {
    SelectionState trial = state;
    trial.add(candidate);
    double j = static_cast<double>(trial.range_chatbots() + trial.range_histogram());
    auto it = state.chatbot_counts.find(candidate.chatbot_model);
    if (it != state.chatbot_counts.end() && it->second == state.min_chatbot_count()) j -= 1.0;
    return j;
}

void curate_language(const std::string& language,
                     const std::vector<const PoolEntry*>& pool, const CurationTarget& target,
                     Rng& rng, BenchmarkSet& out) {
    std::set<std::pair<std::string, std::string>> pairs;
    std::set<std::string> chatbots;
    for (const PoolEntry* e : pool) {
        pairs.insert({e->user_model, e->chatbot_model});
        chatbots.insert(e->chatbot_model);
    }
    target.check(pairs.size());

    SelectionState state;
    for (const auto& c : chatbots) state.chatbot_counts[c] = 0;

    auto emit = [&](const PoolEntry* e, bool seeded, int stage, const std::string& kind,
                    bool relaxed, double objective) {
        state.add(*e);
        core::BenchmarkEntry entry;
        entry.dialogue_id = e->dialogue_id;
        entry.language = e->language;
        entry.chatbot_model = e->chatbot_model;
        entry.user_model = e->user_model;
        entry.seeded_no_issue = seeded;
        entry.source_assessment = e->assessment;
        out.entries.push_back(std::move(entry));
        out.audit_log.push_back({stage, kind, e->dialogue_id, relaxed, objective});
    };

    // Stage 1: one issue-free, overall-5 dialogue per (user, chatbot) pair.
    for (const auto& [user, chatbot] : pairs) {
        std::vector<const PoolEntry*> candidates;
        for (const PoolEntry* e : pool)
            if (e->user_model == user && e->chatbot_model == chatbot &&
                !e->assessment.has_any_issue() && e->assessment.overall == 5 &&
                !state.chosen.count(e->dialogue_id))
                candidates.push_back(e);
        if (candidates.empty()) {
            out.warnings.push_back(language + ": no issue-free overall-5 dialogue for pair (" +
                                   user + ", " + chatbot + "), skipped in stage 1");
            continue;
        }
        const PoolEntry* pick = candidates[rng.below(candidates.size())];
        emit(pick, /*seeded=*/true, /*stage=*/1, kNoIssue, /*relaxed=*/false, 0.0);
    }

    // Stage 2: rotate over issue kinds, minimizing the imbalance objective.
    const auto kinds = rotation_kinds();
    std::size_t kind_cursor = 0;
    std::size_t selected_for_language =
        std::count_if(out.entries.begin(), out.entries.end(), [&](const core::BenchmarkEntry& e) {
            return e.language.code == language;
        });

    while (selected_for_language < static_cast<std::size_t>(target.per_language_size)) {
        std::vector<const PoolEntry*> remaining;
        for (const PoolEntry* e : pool)
            if (!state.chosen.count(e->dialogue_id)) remaining.push_back(e);
        if (remaining.empty()) {
            out.warnings.push_back(language + ": pool exhausted at " +
                                   std::to_string(selected_for_language) + "/" +
                                   std::to_string(target.per_language_size));
            break;
        }

        const std::string& kind = kinds[kind_cursor % kinds.size()];
        ++kind_cursor;

        std::vector<const PoolEntry*> candidates;
        for (const PoolEntry* e : remaining)
            if (entry_has_kind(*e, kind)) candidates.push_back(e);
        bool relaxed = candidates.empty();
        if (relaxed) candidates = remaining;

        double best = std::numeric_limits<double>::infinity();
        std::vector<const PoolEntry*> best_set;
        for (const PoolEntry* e : candidates) {
            double j = objective_after(state, *e);
            if (j < best - 1e-12) {
                best = j;
                best_set.assign(1, e);
            } else if (j <= best + 1e-12) {
                best_set.push_back(e);
            }
        }
        const PoolEntry* pick = best_set[rng.below(best_set.size())];
        emit(pick, /*seeded=*/false, /*stage=*/2, kind, relaxed, best);
        ++selected_for_language;
    }
}

}  // namespace

BenchmarkSet curate(const std::vector<PoolEntry>& pool, const CurationTarget& target,
                    std::uint64_t seed) {
    BenchmarkSet out;
    out.curation_seed = seed;

    std::map<std::string, std::vector<const PoolEntry*>> by_language;
    for (const auto& e : pool) by_language[e.language.code].push_back(&e);

    Rng root(seed);
    for (const auto& [language, entries] : by_language) {
        Rng lang_rng = root.fork("curate:" + language);
        curate_language(language, entries, target, lang_rng, out);
    }

    std::set<std::string> ids;
    for (const auto& e : out.entries)
        if (!ids.insert(e.dialogue_id).second)
            throw Error("duplicate dialogue in benchmark: " + e.dialogue_id);
    return out;
}

std::vector<const core::AnnotationRecord*> AnnotationStore::for_dialogue(
    const std::string& dialogue_id) const {
    std::vector<const core::AnnotationRecord*> out;
    for (const auto& r : records)
        if (r.dialogue_id == dialogue_id) out.push_back(&r);
    return out;
}

AnnotationStore ingest_annotations(const std::vector<std::filesystem::path>& files,
                                   const std::vector<core::BenchmarkEntry>& benchmark) {
    std::map<std::string, std::string> language_of;  // dialogue -> language
    for (const auto& e : benchmark) language_of[e.dialogue_id] = e.language.code;

    AnnotationStore store;
    std::set<std::pair<std::string, std::string>> seen;
    std::map<std::string, std::set<std::string>> annotators;

    for (const auto& file : files) {
        for (auto& record : core::read_annotation_tsv(file)) {
            auto lang = language_of.find(record.dialogue_id);
            if (lang == language_of.end())
                throw SchemaError("dialogue_id", file.string() + ": unknown dialogue_id '" +
                                                     record.dialogue_id +
                                                     "' (not in the benchmark)");
            if (!seen.insert({record.dialogue_id, record.annotator_id}).second)
                throw SchemaError("annotator_id",
                                  file.string() + ": duplicate record for dialogue '" +
                                      record.dialogue_id + "', annotator '" +
                                      record.annotator_id + "'");
            annotators[lang->second].insert(record.annotator_id);
            store.records.push_back(std::move(record));
        }
    }

    for (auto& [language, ids] : annotators)
        store.annotators_by_language[language] = {ids.begin(), ids.end()};

    // completeness: every annotator seen for a language should cover all of
    // that language's benchmark dialogues
    for (const auto& [language, ids] : store.annotators_by_language) {
        for (const auto& annotator : ids) {
            std::size_t covered = 0, total = 0;
            for (const auto& e : benchmark) {
                if (e.language.code != language) continue;
                ++total;
                if (seen.count({e.dialogue_id, annotator})) ++covered;
            }
            if (covered != total)
                store.warnings.push_back("annotator '" + annotator + "' covers " +
                                         std::to_string(covered) + "/" + std::to_string(total) +
                                         " dialogues for " + language);
        }
    }
    return store;
}

AnnotationStore ingest_annotations_dir(const std::filesystem::path& dir,
                                       const std::vector<core::BenchmarkEntry>& benchmark) {
    if (!std::filesystem::is_directory(dir))
        throw ConfigError("annotation directory not found: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".tsv")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw ConfigError("no .tsv files in " + dir.string());
    return ingest_annotations(files, benchmark);
}

BenchmarkStats benchmark_stats(const std::vector<core::BenchmarkEntry>& benchmark,
                               const AnnotationStore& annotations) {
    BenchmarkStats stats;
    for (const auto& e : benchmark) {
        stats.dialogues_per_language[e.language.code] += 1;
        ++stats.total_dialogues;
    }
    stats.annotation_records = annotations.records.size();
    stats.assessment_cells = annotations.records.size() * (core::kIssueCount + 1);

    std::map<std::string, std::size_t> per_annotator_totals;
    std::map<std::string, std::array<std::size_t, core::kIssueCount>> per_annotator_positives;
    for (const auto& r : annotations.records) {
        per_annotator_totals[r.annotator_id] += 1;
        auto& positives = per_annotator_positives[r.annotator_id];
        for (int i = 0; i < core::kIssueCount; ++i)
            positives[i] += static_cast<std::size_t>(r.labels[i]);
        stats.overall_histogram[r.overall] += 1;
    }

    for (int i = 0; i < core::kIssueCount; ++i) {
        const std::string& issue = core::issue_names()[i];
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& [annotator, total] : per_annotator_totals) {
            double rate = total == 0 ? 0.0
                                     : static_cast<double>(per_annotator_positives[annotator][i]) /
                                           static_cast<double>(total);
            stats.positive_rate_per_annotator[issue][annotator] = rate;
            sum += rate;
            ++n;
        }
        stats.positive_rate_mean[issue] = n == 0 ? 0.0 : sum / static_cast<double>(n);
    }

    for (const auto& [language, ids] : annotations.annotators_by_language)
        if (ids.size() < 2) stats.single_annotator_languages.push_back(language);
    return stats;
}

}  // namespace medal::curation
