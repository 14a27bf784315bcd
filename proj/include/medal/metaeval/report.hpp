#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "medal/core/types.hpp"
#include "medal/curation/curation.hpp"
#include "medal/metaeval/harness.hpp"
#include "medal/metaeval/metrics.hpp"

namespace medal::metaeval {

/// One aligned scoring unit: the prediction flags plus one annotator set's
/// flags for the same dialogues.
struct ClassificationReport {
    // issue -> metrics, averaged over the available annotator sets
    std::map<std::string, IssueMetrics> combined;
    std::map<std::string, std::map<std::string, IssueMetrics>> per_language;
    std::size_t scored_dialogues = 0;
    std::vector<std::string> missing_predictions;
};

/// Per-issue classification metrics against every available annotator set,
/// unweighted-averaged per language; the combined block aggregates
/// confusions per annotator slot across languages, then averages slots.
ClassificationReport f1_suite(const std::vector<Prediction>& predictions,
                              const std::vector<core::BenchmarkEntry>& benchmark,
                              const curation::AnnotationStore& annotations);

/// Human reference: the two annotator sets of each double-annotated
/// language scored against each other (direction-averaged).
ClassificationReport human_reference_suite(const std::vector<core::BenchmarkEntry>& benchmark,
                                           const curation::AnnotationStore& annotations);

struct CorrelationReport {
    Correlation pearson;
    Correlation spearman;
};

/// Judge overall vs the mean of available annotator overalls per dialogue.
std::map<std::string, CorrelationReport> correlation_suite(
    const std::vector<Prediction>& predictions, const std::vector<core::BenchmarkEntry>& benchmark,
    const curation::AnnotationStore& annotations);  // keys: language codes + "combined"

struct LanguageAgreement {
    bool available = false;  // needs two annotators
    std::map<std::string, double> exact;            // per issue
    double overall_exact = 0.0;
    double overall_adjacent = 0.0;
    std::map<std::string, std::optional<double>> alpha_nominal;  // per issue
    std::optional<double> overall_alpha_interval;
    std::optional<double> humanlikeness_alpha_interval;
};

std::map<std::string, LanguageAgreement> agreement_suite(
    const std::vector<core::BenchmarkEntry>& benchmark,
    const curation::AnnotationStore& annotations);

struct SignificanceEntry {
    std::string annotator_as_predictor;
    std::string annotator_as_gold;
    McNemarResult result;
};

/// McNemar between the model and each annotator (scored against the other
/// annotator as gold), pooled over double-annotated languages.
std::map<std::string, std::vector<SignificanceEntry>> significance_suite(
    const std::vector<Prediction>& predictions, const std::vector<core::BenchmarkEntry>& benchmark,
    const curation::AnnotationStore& annotations);

struct MetaEvalReport {
    ClassificationReport classification;
    ClassificationReport human_reference;
    std::map<std::string, CorrelationReport> correlation;
    std::map<std::string, LanguageAgreement> agreement;
    std::map<std::string, std::vector<SignificanceEntry>> significance;
    curation::BenchmarkStats stats;
};

MetaEvalReport build_report(const std::vector<Prediction>& predictions,
                            const std::vector<core::BenchmarkEntry>& benchmark,
                            const curation::AnnotationStore& annotations);

/// Deterministic JSON rendering (sorted keys, fixed layout); identical
/// inputs produce byte-identical output.
std::string report_to_json(const MetaEvalReport& report);

}  // namespace medal::metaeval
