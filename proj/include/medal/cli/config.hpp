#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "medal/agents/backend.hpp"
#include "medal/agents/prompts.hpp"
#include "medal/autolabel/autolabel.hpp"
#include "medal/curation/curation.hpp"
#include "medal/metaeval/harness.hpp"
#include "medal/orchestrator/orchestrator.hpp"
#include "medal/seedgen/seedgen.hpp"
#include "medal/util/toml.hpp"

namespace medal::cli {

/// Backend definitions from the [backends.*] config tables. Scripted
/// backends are shared instances; hosted backends read their token from the
/// environment variable named in the config (default
/// MEDAL_API_TOKEN_<NAME>). Model ids resolve through the [models] table,
/// falling back to the "default" entry.
class BackendRegistry {
public:
    static BackendRegistry from_config(const toml::Table& table,
                                       const std::filesystem::path& base_dir);

    agents::BackendPtr resolve(const std::string& model) const;

    /// The scripted backend instance behind a model, when it is scripted
    /// (used by tests and dry-run accounting).
    std::shared_ptr<agents::ScriptedBackend> scripted(const std::string& model) const;

private:
    std::map<std::string, agents::BackendPtr> backends_;  // by backend name
    std::map<std::string, std::string> model_to_backend_;
    std::optional<std::string> default_backend_;
};

/// Everything a pipeline run needs, loaded from one declarative config file.
/// Relative paths are resolved against the config file's directory.
struct PipelineConfig {
    std::filesystem::path base_dir;

    orchestrator::CampaignConfig campaign;
    bool end_flag_substring = false;
    bool lenient_verdicts = false;
    bool allow_extra_languages = false;

    std::filesystem::path scenes_path;
    std::filesystem::path personas_path;
    std::optional<std::filesystem::path> affects_path;
    std::optional<std::filesystem::path> affect_lexicon_path;
    std::optional<std::filesystem::path> fewshot_dir;
    std::map<std::string, std::string> countries;

    BackendRegistry backends;

    // decoding profiles, standard unless explicitly overridden
    std::map<std::string, agents::DecodingProfile> profiles;

    std::string label_judge_model;
    int label_runs = 1;
    std::string screen_judge_model;
    std::optional<std::filesystem::path> filter_keywords_path;

    curation::CurationTarget curation_target;
    std::uint64_t curation_seed = 0;

    std::string meta_judge_model;
    std::string meta_judge_profile = "meta_eval";

    std::string compare_judge_model;
    std::string compare_criterion;

    static PipelineConfig load(const std::filesystem::path& path);

    agents::DecodingProfile profile(const std::string& name) const;
    core::ParseOptions parse_options() const;
    orchestrator::GenerationSetup generation_setup() const;
    seedgen::SeedSampler make_sampler(seedgen::ScenePool& scenes, seedgen::PersonaPool& personas,
                                      seedgen::AffectList& affects) const;
    void load_pools(seedgen::ScenePool& scenes, seedgen::PersonaPool& personas,
                    seedgen::AffectList& affects) const;
};

}  // namespace medal::cli
