#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "medal/core/types.hpp"
#include "medal/util/rng.hpp"

namespace medal::curation {

/// Per-language benchmark size and the balancing axes. "no_issue" joins the
/// eight issue kinds in the stage-2 rotation.
struct CurationTarget {
    int per_language_size = 100;

    void check(std::size_t model_pairs) const;
};

/// One candidate: a dialogue that survived filtering, with its assessment.
struct PoolEntry {
    std::string dialogue_id;
    core::LanguageTag language;
    std::string user_model;
    std::string chatbot_model;
    core::DialogueAssessment assessment;
};

/// Joins dialogues with their assessments, dropping excluded ids (keyword
/// filter hits and screened-out dialogues must be removed before curation).
std::vector<PoolEntry> build_pool(const std::vector<core::Dialogue>& dialogues,
                                  const std::vector<core::DialogueAssessment>& assessments,
                                  const std::set<std::string>& excluded_ids);

struct SelectionDecision {
    int stage = 1;            // 1 = no-issue seeding, 2 = issue rotation
    std::string issue_kind;   // "no_issue" or an issue name
    std::string dialogue_id;
    bool relaxed = false;     // stage 2 step with no candidate for the kind
    double objective = 0.0;   // J after the pick (stage 2)
};

struct BenchmarkSet {
    std::vector<core::BenchmarkEntry> entries;  // grouped by language, selection order
    std::uint64_t curation_seed = 0;
    std::vector<SelectionDecision> audit_log;
    std::vector<std::string> warnings;
};

/// Two-stage balanced selection per language. Stage 1 seeds one zero-issue,
/// overall-5 dialogue per (user, chatbot) pair. Stage 2 rotates over the
/// eight issue kinds plus no_issue; each step picks, among candidates with
/// the current kind, one minimizing J = range(per-chatbot counts) +
/// range(overall histogram over scores 2..5), with a coverage bonus for
/// chatbots at the minimum count; ties break uniformly at random. Steps with
/// no candidate for the kind relax the requirement and are logged.
/// Deterministic given (pool, target, seed).
BenchmarkSet curate(const std::vector<PoolEntry>& pool, const CurationTarget& target,
                    std::uint64_t seed);

// ---------------------------------------------------------------------------
// Annotation ingestion
// ---------------------------------------------------------------------------

struct AnnotationStore {
    std::vector<core::AnnotationRecord> records;
    // language code -> annotator ids seen for that language, sorted
    std::map<std::string, std::vector<std::string>> annotators_by_language;
    std::vector<std::string> warnings;  // incompleteness notes

    std::vector<const core::AnnotationRecord*> for_dialogue(const std::string& dialogue_id) const;
};

/// Reads annotator TSV files (the exchange format) and validates every
/// record against the benchmark: unknown dialogue ids, duplicate
/// (dialogue, annotator) pairs, and out-of-range values are errors.
AnnotationStore ingest_annotations(const std::vector<std::filesystem::path>& files,
                                   const std::vector<core::BenchmarkEntry>& benchmark);

AnnotationStore ingest_annotations_dir(const std::filesystem::path& dir,
                                       const std::vector<core::BenchmarkEntry>& benchmark);

// ---------------------------------------------------------------------------
// Benchmark summary
// ---------------------------------------------------------------------------

struct BenchmarkStats {
    std::map<std::string, std::size_t> dialogues_per_language;
    std::size_t total_dialogues = 0;
    std::size_t annotation_records = 0;
    /// 9 dimensions (8 issues + overall) per annotation record.
    std::size_t assessment_cells = 0;
    // issue name -> positive rate per annotator id, and the mean
    std::map<std::string, std::map<std::string, double>> positive_rate_per_annotator;
    std::map<std::string, double> positive_rate_mean;
    std::array<std::size_t, 6> overall_histogram{};  // index = score, [1..5] used
    /// Languages with a single annotator, for which agreement statistics
    /// are unavailable.
    std::vector<std::string> single_annotator_languages;
};

BenchmarkStats benchmark_stats(const std::vector<core::BenchmarkEntry>& benchmark,
                               const AnnotationStore& annotations);

}  // namespace medal::curation
