#include "medal/cli/config.hpp"

#include <cctype>
#include <cstdlib>

#include "medal/util/errors.hpp"

namespace medal::cli {
namespace {

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::filesystem::path& path) {
    return path.is_absolute() ? path : base / path;
}

std::string default_token_env(const std::string& backend_name) {
    std::string env = "MEDAL_API_TOKEN_";
    for (unsigned char c : backend_name)
        env += static_cast<char>(std::isalnum(c) ? std::toupper(c) : '_');
    return env;
}

}  // namespace

BackendRegistry BackendRegistry::from_config(const toml::Table& table,
                                             const std::filesystem::path& base_dir) {
    BackendRegistry registry;
    for (const auto& name : table.subtables("backends")) {
        const std::string prefix = "backends." + name;
        std::string type = table.require_string(prefix + ".type");
        if (type == "scripted") {
            auto script = table.get_string(prefix + ".script");
            if (!script)
                throw ConfigError(prefix + ": scripted backend needs a 'script' file");
            registry.backends_[name] = agents::ScriptedBackend::load(resolve(base_dir, *script));
        } else if (type == "hosted") {
            agents::HostedBackendConfig config;
            config.endpoint = table.require_string(prefix + ".endpoint");
            std::string token_env =
                table.get_string(prefix + ".token_env").value_or(default_token_env(name));
            if (const char* token = std::getenv(token_env.c_str())) config.api_token = token;
            if (auto v = table.get_int(prefix + ".max_retries"))
                config.max_retries = static_cast<int>(*v);
            if (auto v = table.get_int(prefix + ".timeout_seconds"))
                config.timeout_seconds = static_cast<int>(*v);
            if (auto v = table.get_int(prefix + ".backoff_initial_ms"))
                config.backoff_initial_ms = static_cast<int>(*v);
            registry.backends_[name] = std::make_shared<agents::HostedBackend>(std::move(config));
        } else {
            throw ConfigError(prefix + ": unknown backend type '" + type + "'");
        }
    }
    for (const auto& key : table.keys_under("models")) {
        std::string backend = table.require_string("models." + key);
        if (!registry.backends_.count(backend))
            throw ConfigError("models." + key + " references unknown backend '" + backend + "'");
        if (key == "default")
            registry.default_backend_ = backend;
        else
            registry.model_to_backend_[key] = backend;
    }
    return registry;
}

agents::BackendPtr BackendRegistry::resolve(const std::string& model) const {
    auto it = model_to_backend_.find(model);
    if (it != model_to_backend_.end()) return backends_.at(it->second);
    if (default_backend_) return backends_.at(*default_backend_);
    throw ConfigError("model '" + model +
                      "' does not resolve to a backend (add it to [models] or set a default)");
}

std::shared_ptr<agents::ScriptedBackend> BackendRegistry::scripted(const std::string& model) const {
    return std::dynamic_pointer_cast<agents::ScriptedBackend>(resolve(model));
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
    toml::Table table = toml::Table::parse_file(path);
    PipelineConfig config;
    config.base_dir = std::filesystem::absolute(path).parent_path();

    auto& campaign = config.campaign;
    campaign.user_models = table.require_string_array("campaign.user_models");
    campaign.chatbot_models = table.require_string_array("campaign.chatbot_models");
    campaign.judge_model = table.require_string("campaign.judge_model");
    for (const auto& code : table.require_string_array("campaign.languages"))
        campaign.languages.push_back(core::LanguageTag{code});
    campaign.scenes_per_language = static_cast<int>(table.require_int("campaign.scenes_per_language"));
    campaign.parallelism = static_cast<int>(table.get_int("campaign.parallelism").value_or(1));
    campaign.rng_seed = static_cast<std::uint64_t>(table.get_int("campaign.rng_seed").value_or(0));

    if (auto v = table.get_int("limits.first_turn_attempts"))
        campaign.limits.first_turn_attempts = static_cast<int>(*v);
    if (auto v = table.get_int("limits.next_turn_attempts"))
        campaign.limits.next_turn_attempts = static_cast<int>(*v);
    if (auto v = table.get_int("limits.max_user_turns"))
        campaign.limits.max_user_turns = static_cast<int>(*v);

    if (auto v = table.get_string("generation.end_flag_mode")) {
        if (*v == "substring") config.end_flag_substring = true;
        else if (*v != "exact")
            throw ConfigError("generation.end_flag_mode must be 'exact' or 'substring'");
    }
    config.lenient_verdicts = table.get_bool("generation.lenient_verdicts").value_or(false);
    config.allow_extra_languages =
        table.get_bool("generation.allow_extra_languages").value_or(false);

    config.scenes_path = resolve(config.base_dir, table.require_string("pools.scenes"));
    config.personas_path = resolve(config.base_dir, table.require_string("pools.personas"));
    if (auto v = table.get_string("pools.affects"))
        config.affects_path = resolve(config.base_dir, *v);
    if (auto v = table.get_string("pools.affect_lexicon"))
        config.affect_lexicon_path = resolve(config.base_dir, *v);
    if (auto v = table.get_string("pools.fewshot_dir"))
        config.fewshot_dir = resolve(config.base_dir, *v);

    for (const auto& key : table.keys_under("countries"))
        config.countries[key] = table.require_string("countries." + key);

    config.backends = BackendRegistry::from_config(table, config.base_dir);

    for (auto name : {agents::ProfileName::user_first, agents::ProfileName::user_next,
                      agents::ProfileName::user_judge, agents::ProfileName::chatbot,
                      agents::ProfileName::strong_judge, agents::ProfileName::meta_eval,
                      agents::ProfileName::meta_eval_reasoning})
        config.profiles[std::string(agents::profile_name(name))] =
            agents::DecodingProfile::standard(name);

    for (const auto& name : table.subtables("profiles")) {
        const std::string prefix = "profiles." + name;
        auto it = config.profiles.find(name);
        if (it == config.profiles.end())
            throw ConfigError(prefix + ": unknown decoding profile");
        if (!table.get_bool(prefix + ".override").value_or(false))
            throw ConfigError(prefix + ": profile deviates from the standard constants; set "
                              "override = true to confirm");
        auto& profile = it->second;
        if (auto v = table.get_double(prefix + ".temperature")) profile.temperature = *v;
        if (auto v = table.get_double(prefix + ".top_p")) profile.top_p = *v;
        if (auto v = table.get_double(prefix + ".presence_penalty")) profile.presence_penalty = *v;
        if (auto v = table.get_int(prefix + ".max_tokens")) profile.max_tokens = static_cast<int>(*v);
        if (auto v = table.get_int(prefix + ".reasoning_budget"))
            profile.reasoning_budget = static_cast<int>(*v);
    }

    config.label_judge_model =
        table.get_string("label.judge_model").value_or(campaign.judge_model);
    config.label_runs = static_cast<int>(table.get_int("label.runs").value_or(1));
    config.screen_judge_model =
        table.get_string("screen.judge_model").value_or(config.label_judge_model);
    if (auto v = table.get_string("filter.keywords"))
        config.filter_keywords_path = resolve(config.base_dir, *v);

    config.curation_target.per_language_size =
        static_cast<int>(table.get_int("curation.per_language_size").value_or(100));
    config.curation_seed = static_cast<std::uint64_t>(table.get_int("curation.seed").value_or(0));

    config.meta_judge_model = table.get_string("judge.model").value_or(config.label_judge_model);
    config.meta_judge_profile = table.get_string("judge.profile").value_or("meta_eval");
    if (config.meta_judge_profile != "meta_eval" &&
        config.meta_judge_profile != "meta_eval_reasoning")
        throw ConfigError("judge.profile must be meta_eval or meta_eval_reasoning");

    config.compare_judge_model =
        table.get_string("compare.judge_model").value_or(config.meta_judge_model);
    config.compare_criterion = table.get_string("compare.criterion")
                                   .value_or(metaeval::default_preference_criterion());
    return config;
}

agents::DecodingProfile PipelineConfig::profile(const std::string& name) const {
    auto it = profiles.find(name);
    if (it == profiles.end()) throw ConfigError("unknown decoding profile '" + name + "'");
    return it->second;
}

core::ParseOptions PipelineConfig::parse_options() const {
    core::ParseOptions opts;
    opts.allow_extra_languages = allow_extra_languages;
    opts.max_user_turns = campaign.limits.max_user_turns;
    return opts;
}

orchestrator::GenerationSetup PipelineConfig::generation_setup() const {
    orchestrator::GenerationSetup setup;
    setup.judge_model = campaign.judge_model;
    setup.end_flag_substring = end_flag_substring;
    setup.lenient_verdicts = lenient_verdicts;
    setup.fewshot = fewshot_dir ? agents::FewShotExamples::load_directory(*fewshot_dir)
                                : agents::FewShotExamples::defaults();
    setup.user_first = profile("user_first");
    setup.user_next = profile("user_next");
    setup.user_judge = profile("user_judge");
    setup.chatbot = profile("chatbot");
    return setup;
}

void PipelineConfig::load_pools(seedgen::ScenePool& scenes, seedgen::PersonaPool& personas,
                                seedgen::AffectList& affects) const {
    seedgen::AffectLexicon lexicon = affect_lexicon_path
                                         ? seedgen::AffectLexicon::load(*affect_lexicon_path)
                                         : seedgen::AffectLexicon::defaults();
    scenes = seedgen::ScenePool::load(scenes_path, lexicon);
    personas = seedgen::PersonaPool::load(personas_path);
    affects = affects_path ? seedgen::AffectList::load(*affects_path)
                           : seedgen::AffectList::defaults();
}

seedgen::SeedSampler PipelineConfig::make_sampler(seedgen::ScenePool& scenes,
                                                  seedgen::PersonaPool& personas,
                                                  seedgen::AffectList& affects) const {
    return seedgen::SeedSampler(scenes, personas, affects, countries);
}

}  // namespace medal::cli
