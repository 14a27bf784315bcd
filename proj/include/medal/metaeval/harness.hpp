#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "medal/agents/backend.hpp"
#include "medal/autolabel/autolabel.hpp"
#include "medal/core/types.hpp"

namespace medal::metaeval {

/// One candidate-judge verdict on one benchmark dialogue, flattened to the
/// eight issue flags plus the overall score ("other" is stored upstream but
/// excluded from every metric). Parse failures become missing markers.
struct Prediction {
    std::string dialogue_id;
    bool missing = false;
    std::string missing_reason;
    std::array<int, core::kIssueCount> labels{};
    int overall = 5;
};

std::string serialize(const Prediction& prediction);
Prediction parse_prediction(const std::string& line);
std::vector<Prediction> read_predictions(const std::filesystem::path& path);

struct JudgeConfig {
    std::string model;
    agents::DecodingProfile profile =
        agents::DecodingProfile::standard(agents::ProfileName::meta_eval);
    int schema_retries = 2;
};

/// Runs the candidate judge over every benchmark dialogue with the shared
/// annotator-guideline prompt, parsing verdicts into predictions. Failed
/// parses are retried, then recorded as missing; backend errors mark the
/// dialogue missing and the run continues. Output order follows the
/// benchmark. Predictions are a pure function of (benchmark, judge config,
/// backend transcript).
std::vector<Prediction> run_judge_harness(const JudgeConfig& config,
                                          const std::vector<core::BenchmarkEntry>& benchmark,
                                          const std::map<std::string, core::Dialogue>& dialogues,
                                          agents::ChatBackend& backend, int parallelism = 1);

}  // namespace medal::metaeval
