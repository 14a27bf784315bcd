#include "medal/metaeval/report.hpp"

#include <algorithm>

#include <json.hpp>

#include "medal/util/errors.hpp"

namespace medal::metaeval {
namespace {

using ojson = nlohmann::ordered_json;

struct AlignedSets {
    // language -> annotator ids (sorted), as ingested
    std::map<std::string, std::vector<std::string>> annotators;
    // (dialogue, annotator) -> record
    std::map<std::pair<std::string, std::string>, const core::AnnotationRecord*> records;
    // dialogue -> language
    std::map<std::string, std::string> language_of;
    // dialogue -> prediction (non-missing only)
    std::map<std::string, const Prediction*> predictions;
};

AlignedSets align(const std::vector<Prediction>& predictions,
                  const std::vector<core::BenchmarkEntry>& benchmark,
                  const curation::AnnotationStore& annotations) {
    AlignedSets aligned;
    aligned.annotators = annotations.annotators_by_language;
    for (const auto& e : benchmark) aligned.language_of[e.dialogue_id] = e.language.code;
    for (const auto& r : annotations.records)
        aligned.records[{r.dialogue_id, r.annotator_id}] = &r;
    for (const auto& p : predictions)
        if (!p.missing) aligned.predictions[p.dialogue_id] = &p;
    return aligned;
}

}  // namespace

ClassificationReport f1_suite(const std::vector<Prediction>& predictions,
                              const std::vector<core::BenchmarkEntry>& benchmark,
                              const curation::AnnotationStore& annotations) {
    ClassificationReport report;
    AlignedSets aligned = align(predictions, benchmark, annotations);

    for (const auto& p : predictions)
        if (p.missing) report.missing_predictions.push_back(p.dialogue_id);

    // confusion per (language, annotator slot, issue); slot = index into the
    // language's sorted annotator list
    std::map<std::string, std::vector<std::array<ConfusionCounts, core::kIssueCount>>> confusions;
    for (const auto& [language, ids] : aligned.annotators)
        confusions[language].resize(ids.size());

    std::set<std::string> scored;
    for (const auto& entry : benchmark) {
        auto pit = aligned.predictions.find(entry.dialogue_id);
        if (pit == aligned.predictions.end()) continue;
        auto ait = aligned.annotators.find(entry.language.code);
        if (ait == aligned.annotators.end()) continue;
        bool any = false;
        for (std::size_t slot = 0; slot < ait->second.size(); ++slot) {
            auto rit = aligned.records.find({entry.dialogue_id, ait->second[slot]});
            if (rit == aligned.records.end()) continue;
            any = true;
            for (int i = 0; i < core::kIssueCount; ++i)
                confusions[entry.language.code][slot][i].add(pit->second->labels[i],
                                                             rit->second->labels[i]);
        }
        if (any) scored.insert(entry.dialogue_id);
    }
    report.scored_dialogues = scored.size();

    // per language: unweighted mean over that language's annotator sets
    std::size_t max_slots = 0;
    for (const auto& [language, slots] : confusions) {
        max_slots = std::max(max_slots, slots.size());
        for (int i = 0; i < core::kIssueCount; ++i) {
            std::vector<IssueMetrics> per_set;
            for (const auto& slot : slots)
                if (slot[i].total() > 0) per_set.push_back(metrics_from_confusion(slot[i]));
            if (!per_set.empty())
                report.per_language[language][core::issue_names()[i]] = mean_metrics(per_set);
        }
    }

    // combined: aggregate confusions per slot across languages, then average
    for (int i = 0; i < core::kIssueCount; ++i) {
        std::vector<IssueMetrics> per_slot;
        for (std::size_t slot = 0; slot < max_slots; ++slot) {
            ConfusionCounts pooled;
            for (const auto& [language, slots] : confusions) {
                if (slot >= slots.size()) continue;
                pooled.tp += slots[slot][i].tp;
                pooled.fp += slots[slot][i].fp;
                pooled.fn += slots[slot][i].fn;
                pooled.tn += slots[slot][i].tn;
            }
            if (pooled.total() > 0) per_slot.push_back(metrics_from_confusion(pooled));
        }
        if (!per_slot.empty()) report.combined[core::issue_names()[i]] = mean_metrics(per_slot);
    }
    return report;
}

ClassificationReport human_reference_suite(const std::vector<core::BenchmarkEntry>& benchmark,
                                           const curation::AnnotationStore& annotations) {
    ClassificationReport report;
    AlignedSets aligned = align({}, benchmark, annotations);

    std::map<std::string, std::array<ConfusionCounts, core::kIssueCount>> forward, backward;
    ConfusionCounts pooled_forward[core::kIssueCount], pooled_backward[core::kIssueCount];

    for (const auto& entry : benchmark) {
        auto ait = aligned.annotators.find(entry.language.code);
        if (ait == aligned.annotators.end() || ait->second.size() < 2) continue;
        auto first = aligned.records.find({entry.dialogue_id, ait->second[0]});
        auto second = aligned.records.find({entry.dialogue_id, ait->second[1]});
        if (first == aligned.records.end() || second == aligned.records.end()) continue;
        ++report.scored_dialogues;
        for (int i = 0; i < core::kIssueCount; ++i) {
            forward[entry.language.code][i].add(first->second->labels[i],
                                                second->second->labels[i]);
            backward[entry.language.code][i].add(second->second->labels[i],
                                                 first->second->labels[i]);
            pooled_forward[i].add(first->second->labels[i], second->second->labels[i]);
            pooled_backward[i].add(second->second->labels[i], first->second->labels[i]);
        }
    }

    for (const auto& [language, counts] : forward) {
        for (int i = 0; i < core::kIssueCount; ++i) {
            std::vector<IssueMetrics> directions;
            if (counts[i].total() > 0) directions.push_back(metrics_from_confusion(counts[i]));
            const auto& back = backward[language][i];
            if (back.total() > 0) directions.push_back(metrics_from_confusion(back));
            if (!directions.empty())
                report.per_language[language][core::issue_names()[i]] = mean_metrics(directions);
        }
    }
    for (int i = 0; i < core::kIssueCount; ++i) {
        std::vector<IssueMetrics> directions;
        if (pooled_forward[i].total() > 0)
            directions.push_back(metrics_from_confusion(pooled_forward[i]));
        if (pooled_backward[i].total() > 0)
            directions.push_back(metrics_from_confusion(pooled_backward[i]));
        if (!directions.empty()) report.combined[core::issue_names()[i]] = mean_metrics(directions);
    }
    return report;
}

std::map<std::string, CorrelationReport> correlation_suite(
    const std::vector<Prediction>& predictions, const std::vector<core::BenchmarkEntry>& benchmark,
    const curation::AnnotationStore& annotations) {
    AlignedSets aligned = align(predictions, benchmark, annotations);

    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> series;
    auto& combined = series["combined"];

    for (const auto& entry : benchmark) {
        auto pit = aligned.predictions.find(entry.dialogue_id);
        if (pit == aligned.predictions.end()) continue;
        auto ait = aligned.annotators.find(entry.language.code);
        if (ait == aligned.annotators.end()) continue;
        // gold = mean of available annotator overalls, the only aggregation
        // consistent with both one- and two-annotator languages
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& annotator : ait->second) {
            auto rit = aligned.records.find({entry.dialogue_id, annotator});
            if (rit == aligned.records.end()) continue;
            sum += rit->second->overall;
            ++n;
        }
        if (n == 0) continue;
        double gold = sum / static_cast<double>(n);
        double predicted = pit->second->overall;
        series[entry.language.code].first.push_back(predicted);
        series[entry.language.code].second.push_back(gold);
        combined.first.push_back(predicted);
        combined.second.push_back(gold);
    }

    std::map<std::string, CorrelationReport> out;
    for (const auto& [key, xy] : series) {
        CorrelationReport r;
        r.pearson = pearson(xy.first, xy.second);
        r.spearman = spearman(xy.first, xy.second);
        out[key] = r;
    }
    return out;
}

std::map<std::string, LanguageAgreement> agreement_suite(
    const std::vector<core::BenchmarkEntry>& benchmark,
    const curation::AnnotationStore& annotations) {
    AlignedSets aligned = align({}, benchmark, annotations);
    std::map<std::string, LanguageAgreement> out;

    for (const auto& [language, ids] : aligned.annotators) {
        LanguageAgreement agreement;
        if (ids.size() < 2) {
            out[language] = agreement;  // unavailable
            continue;
        }
        std::array<std::vector<int>, core::kIssueCount> a_flags, b_flags;
        std::vector<int> a_overall, b_overall;
        std::vector<std::optional<double>> a_human, b_human;

        for (const auto& entry : benchmark) {
            if (entry.language.code != language) continue;
            auto first = aligned.records.find({entry.dialogue_id, ids[0]});
            auto second = aligned.records.find({entry.dialogue_id, ids[1]});
            if (first == aligned.records.end() || second == aligned.records.end()) continue;
            for (int i = 0; i < core::kIssueCount; ++i) {
                a_flags[i].push_back(first->second->labels[i]);
                b_flags[i].push_back(second->second->labels[i]);
            }
            a_overall.push_back(first->second->overall);
            b_overall.push_back(second->second->overall);
            a_human.push_back(first->second->user_humanlikeness
                                  ? std::optional<double>(*first->second->user_humanlikeness)
                                  : std::nullopt);
            b_human.push_back(second->second->user_humanlikeness
                                  ? std::optional<double>(*second->second->user_humanlikeness)
                                  : std::nullopt);
        }
        if (a_overall.empty()) {
            out[language] = agreement;
            continue;
        }
        agreement.available = true;
        for (int i = 0; i < core::kIssueCount; ++i) {
            agreement.exact[core::issue_names()[i]] = exact_agreement(a_flags[i], b_flags[i]);
            RatingMatrix m(2);
            for (std::size_t k = 0; k < a_flags[i].size(); ++k) {
                m[0].push_back(static_cast<double>(a_flags[i][k]));
                m[1].push_back(static_cast<double>(b_flags[i][k]));
            }
            agreement.alpha_nominal[core::issue_names()[i]] =
                krippendorff_alpha(m, AlphaLevel::nominal);
        }
        agreement.overall_exact = exact_agreement(a_overall, b_overall);
        agreement.overall_adjacent = adjacent_agreement(a_overall, b_overall);
        RatingMatrix overall_matrix(2);
        for (std::size_t k = 0; k < a_overall.size(); ++k) {
            overall_matrix[0].push_back(static_cast<double>(a_overall[k]));
            overall_matrix[1].push_back(static_cast<double>(b_overall[k]));
        }
        agreement.overall_alpha_interval =
            krippendorff_alpha(overall_matrix, AlphaLevel::interval);
        bool any_human = std::any_of(a_human.begin(), a_human.end(),
                                     [](const auto& v) { return v.has_value(); });
        if (any_human) {
            RatingMatrix human_matrix(2);
            human_matrix[0] = a_human;
            human_matrix[1] = b_human;
            agreement.humanlikeness_alpha_interval =
                krippendorff_alpha(human_matrix, AlphaLevel::interval);
        }
        out[language] = std::move(agreement);
    }
    return out;
}

std::map<std::string, std::vector<SignificanceEntry>> significance_suite(
    const std::vector<Prediction>& predictions, const std::vector<core::BenchmarkEntry>& benchmark,
    const curation::AnnotationStore& annotations) {
    AlignedSets aligned = align(predictions, benchmark, annotations);

    // pooled over double-annotated languages; each annotator plays predictor
    // against the other as gold
    std::array<std::vector<int>, core::kIssueCount> model, first, second;
    for (const auto& entry : benchmark) {
        auto pit = aligned.predictions.find(entry.dialogue_id);
        if (pit == aligned.predictions.end()) continue;
        auto ait = aligned.annotators.find(entry.language.code);
        if (ait == aligned.annotators.end() || ait->second.size() < 2) continue;
        auto a = aligned.records.find({entry.dialogue_id, ait->second[0]});
        auto b = aligned.records.find({entry.dialogue_id, ait->second[1]});
        if (a == aligned.records.end() || b == aligned.records.end()) continue;
        for (int i = 0; i < core::kIssueCount; ++i) {
            model[i].push_back(pit->second->labels[i]);
            first[i].push_back(a->second->labels[i]);
            second[i].push_back(b->second->labels[i]);
        }
    }

    std::map<std::string, std::vector<SignificanceEntry>> out;
    if (model[0].empty()) return out;
    for (int i = 0; i < core::kIssueCount; ++i) {
        std::vector<SignificanceEntry> entries;
        entries.push_back({"annotator_1", "annotator_2", mcnemar(model[i], first[i], second[i])});
        entries.push_back({"annotator_2", "annotator_1", mcnemar(model[i], second[i], first[i])});
        out[core::issue_names()[i]] = std::move(entries);
    }
    return out;
}

MetaEvalReport build_report(const std::vector<Prediction>& predictions,
                            const std::vector<core::BenchmarkEntry>& benchmark,
                            const curation::AnnotationStore& annotations) {
    MetaEvalReport report;
    report.classification = f1_suite(predictions, benchmark, annotations);
    report.human_reference = human_reference_suite(benchmark, annotations);
    report.correlation = correlation_suite(predictions, benchmark, annotations);
    report.agreement = agreement_suite(benchmark, annotations);
    report.significance = significance_suite(predictions, benchmark, annotations);
    report.stats = curation::benchmark_stats(benchmark, annotations);
    return report;
}

namespace {

ojson metrics_to_json(const IssueMetrics& m) {
    ojson j;
    auto put = [&j](const char* key, const std::optional<double>& v) {
        if (v) j[key] = *v;
        else j[key] = nullptr;
    };
    put("f1_plus", m.f1_plus);
    put("f1_minus", m.f1_minus);
    put("precision_plus", m.precision_plus);
    put("recall_plus", m.recall_plus);
    put("accuracy", m.accuracy);
    j["predicted_positive_count"] = m.predicted_positive_count;
    return j;
}

ojson classification_to_json(const ClassificationReport& report) {
    ojson j;
    ojson combined;
    for (const auto& [issue, metrics] : report.combined) combined[issue] = metrics_to_json(metrics);
    j["combined"] = std::move(combined);
    ojson per_language;
    for (const auto& [language, issues] : report.per_language) {
        ojson block;
        for (const auto& [issue, metrics] : issues) block[issue] = metrics_to_json(metrics);
        per_language[language] = std::move(block);
    }
    j["per_language"] = std::move(per_language);
    j["scored_dialogues"] = report.scored_dialogues;
    j["missing_predictions"] = report.missing_predictions;
    return j;
}

ojson correlation_to_json(const CorrelationReport& r) {
    ojson j;
    auto put = [](ojson& obj, const char* key, const std::optional<double>& v) {
        if (v) obj[key] = *v;
        else obj[key] = nullptr;
    };
    put(j, "pearson_r", r.pearson.r);
    put(j, "pearson_p", r.pearson.p);
    put(j, "spearman_rho", r.spearman.r);
    put(j, "spearman_p", r.spearman.p);
    j["n"] = r.pearson.n;
    return j;
}

}  // namespace

std::string report_to_json(const MetaEvalReport& report) {
    ojson j;
    j["schema_version"] = core::kSchemaVersion;

    ojson stats;
    stats["total_dialogues"] = report.stats.total_dialogues;
    ojson per_lang;
    for (const auto& [language, count] : report.stats.dialogues_per_language)
        per_lang[language] = count;
    stats["dialogues_per_language"] = std::move(per_lang);
    stats["annotation_records"] = report.stats.annotation_records;
    stats["assessment_cells"] = report.stats.assessment_cells;
    ojson hist = ojson::array();
    for (int score = 1; score <= 5; ++score) hist.push_back(report.stats.overall_histogram[score]);
    stats["overall_histogram"] = std::move(hist);
    stats["single_annotator_languages"] = report.stats.single_annotator_languages;
    ojson rates;
    for (const auto& [issue, rate] : report.stats.positive_rate_mean) rates[issue] = rate;
    stats["positive_rate_mean"] = std::move(rates);
    j["benchmark"] = std::move(stats);

    j["classification"] = classification_to_json(report.classification);
    j["human_reference"] = classification_to_json(report.human_reference);

    ojson correlation;
    for (const auto& [key, r] : report.correlation) correlation[key] = correlation_to_json(r);
    j["correlation"] = std::move(correlation);

    ojson agreement;
    for (const auto& [language, a] : report.agreement) {
        ojson block;
        block["available"] = a.available;
        if (a.available) {
            ojson exact;
            for (const auto& [issue, value] : a.exact) exact[issue] = value;
            block["exact"] = std::move(exact);
            block["overall_exact"] = a.overall_exact;
            block["overall_adjacent"] = a.overall_adjacent;
            ojson alpha;
            for (const auto& [issue, value] : a.alpha_nominal) {
                if (value) alpha[issue] = *value;
                else alpha[issue] = nullptr;
            }
            block["alpha_nominal"] = std::move(alpha);
            if (a.overall_alpha_interval) block["overall_alpha_interval"] = *a.overall_alpha_interval;
            else block["overall_alpha_interval"] = nullptr;
            if (a.humanlikeness_alpha_interval)
                block["humanlikeness_alpha_interval"] = *a.humanlikeness_alpha_interval;
            else block["humanlikeness_alpha_interval"] = nullptr;
        }
        agreement[language] = std::move(block);
    }
    j["agreement"] = std::move(agreement);

    ojson significance;
    for (const auto& [issue, entries] : report.significance) {
        ojson list = ojson::array();
        for (const auto& e : entries) {
            ojson item;
            item["annotator_as_predictor"] = e.annotator_as_predictor;
            item["annotator_as_gold"] = e.annotator_as_gold;
            item["b"] = e.result.b;
            item["c"] = e.result.c;
            item["statistic"] = e.result.statistic;
            item["p"] = e.result.p;
            item["significant_at_0.05"] = e.result.significant_at_05;
            list.push_back(std::move(item));
        }
        significance[issue] = std::move(list);
    }
    j["significance"] = std::move(significance);

    return j.dump(2) + "\n";
}

}  // namespace medal::metaeval
