#include "medal/metaeval/harness.hpp"

#include <json.hpp>

#include "medal/core/jsonl.hpp"
#include "medal/util/errors.hpp"
#include "medal/util/io.hpp"
#include "medal/util/parallel.hpp"

namespace medal::metaeval {

using ojson = nlohmann::ordered_json;

std::string serialize(const Prediction& prediction) {
    ojson j;
    j["schema_version"] = core::kSchemaVersion;
    j["dialogue_id"] = prediction.dialogue_id;
    j["missing"] = prediction.missing;
    if (prediction.missing) {
        j["missing_reason"] = prediction.missing_reason;
    } else {
        ojson labels;
        for (int i = 0; i < core::kIssueCount; ++i)
            labels[core::issue_names()[i]] = prediction.labels[i];
        j["labels"] = std::move(labels);
        j["overall"] = prediction.overall;
    }
    return j.dump() + "\n";
}

Prediction parse_prediction(const std::string& line) {
    ojson j;
    try {
        j = ojson::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("", std::string("malformed JSON: ") + e.what());
    }
    Prediction p;
    p.dialogue_id = j.at("dialogue_id").get<std::string>();
    p.missing = j.value("missing", false);
    if (p.missing) {
        p.missing_reason = j.value("missing_reason", std::string());
        return p;
    }
    const auto& labels = j.at("labels");
    for (int i = 0; i < core::kIssueCount; ++i) {
        const std::string& name = core::issue_names()[i];
        int flag = labels.at(name).get<int>();
        if (flag != 0 && flag != 1) throw SchemaError(name, "flag must be 0 or 1");
        p.labels[i] = flag;
    }
    p.overall = j.at("overall").get<int>();
    if (p.overall < 1 || p.overall > 5) throw SchemaError("overall", "overall out of range");
    return p;
}

std::vector<Prediction> read_predictions(const std::filesystem::path& path) {
    std::vector<Prediction> out;
    for_each_line(path, [&](std::size_t lineno, const std::string& line) {
        try {
            out.push_back(parse_prediction(line));
        } catch (const SchemaError& e) {
            throw SchemaError(e.field(),
                              path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    });
    return out;
}

std::vector<Prediction> run_judge_harness(const JudgeConfig& config,
                                          const std::vector<core::BenchmarkEntry>& benchmark,
                                          const std::map<std::string, core::Dialogue>& dialogues,
                                          agents::ChatBackend& backend, int parallelism) {
    std::vector<Prediction> predictions(benchmark.size());

    autolabel::LabelerOptions options;
    options.judge_model = config.model;
    options.profile = config.profile;
    options.schema_retries = config.schema_retries;

    parallel_for(benchmark.size(), static_cast<std::size_t>(parallelism), [&](std::size_t i) {
        const auto& entry = benchmark[i];
        Prediction p;
        p.dialogue_id = entry.dialogue_id;
        auto it = dialogues.find(entry.dialogue_id);
        if (it == dialogues.end()) {
            p.missing = true;
            p.missing_reason = "dialogue text not available";
            predictions[i] = std::move(p);
            return;
        }
        try {
            auto assessment = autolabel::label_dialogue(it->second, backend, options);
            if (!assessment) {
                p.missing = true;
                p.missing_reason = "judge output failed schema validation";
            } else {
                for (int k = 0; k < core::kIssueCount; ++k) p.labels[k] = assessment->labels[k].flag;
                p.overall = assessment->overall;
            }
        } catch (const std::exception& e) {
            p.missing = true;
            p.missing_reason = e.what();
        }
        predictions[i] = std::move(p);
    });
    return predictions;
}

}  // namespace medal::metaeval
