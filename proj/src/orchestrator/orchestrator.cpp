#include "medal/orchestrator/orchestrator.hpp"

#include <chrono>
#include <mutex>

#include <json.hpp>

#include "medal/util/errors.hpp"
#include "medal/util/io.hpp"
#include "medal/util/parallel.hpp"
#include "medal/util/rng.hpp"

namespace medal::orchestrator {

void LoopLimits::check() const {
    if (first_turn_attempts < 1 || next_turn_attempts < 1 || max_user_turns < 1)
        throw ConfigError("loop limits must all be >= 1");
}

void CampaignConfig::check() const {
    if (user_models.empty()) throw ConfigError("campaign needs at least one user model");
    if (chatbot_models.empty()) throw ConfigError("campaign needs at least one chatbot model");
    if (judge_model.empty()) throw ConfigError("campaign needs a judge model");
    if (languages.empty()) throw ConfigError("campaign needs at least one language");
    if (scenes_per_language < 1) throw ConfigError("scenes_per_language must be >= 1");
    if (parallelism < 1) throw ConfigError("parallelism must be >= 1");
    limits.check();
}

TurnOutcome generate_user_turn(const core::SeedContext& seed,
                               const std::vector<core::Turn>& history, const LoopLimits& limits,
                               const GenerationSetup& setup, const std::string& session) {
    const bool first = history.empty();
    if (!first && history.back().role != core::Role::chatbot)
        throw Error("user turn generation requires history ending with a chatbot turn");
    const int limit = first ? limits.first_turn_attempts : limits.next_turn_attempts;

    std::optional<agents::RejectedAttempt> rejected;
    std::vector<std::string> trail;

    for (int attempt = 1; attempt <= limit; ++attempt) {
        agents::PromptPair prompt =
            first ? agents::render_first_turn_prompt(seed, setup.fewshot)
                  : agents::render_user_turn_prompt(seed, history, rejected);
        auto request = agents::ChatRequest::make(
            setup.user_model, first ? setup.user_first : setup.user_next,
            {{agents::MessageRole::system, prompt.system},
             {agents::MessageRole::user, prompt.user}},
            session);
        std::string text = setup.user_backend->complete(request).text;

        if (agents::is_end_of_dialogue(text, setup.end_flag_substring)) return TurnEndOfDialogue{};

        std::vector<core::Turn> judged = history;
        core::Turn candidate;
        candidate.role = core::Role::user;
        candidate.text = text;
        judged.push_back(candidate);
        agents::PromptPair judge_prompt = agents::render_user_judge_prompt(judged);
        auto judge_request = agents::ChatRequest::make(
            setup.judge_model, setup.user_judge,
            {{agents::MessageRole::system, judge_prompt.system},
             {agents::MessageRole::user, judge_prompt.user}},
            session);
        std::string verdict_text = setup.judge_backend->complete(judge_request).text;
        agents::JudgeVerdict verdict;
        if (setup.lenient_verdicts) {
            verdict = agents::parse_verdict(verdict_text, true);
        } else {
            verdict = agents::parse_verdict(verdict_text, false);
        }

        if (verdict.accept) return TurnAccepted{std::move(text), attempt, std::move(trail)};
        trail.push_back(*verdict.feedback);
        rejected = agents::RejectedAttempt{std::move(text), *verdict.feedback};
    }
    return TurnExhausted{std::move(trail)};
}

core::Dialogue generate_dialogue(const PreparedStarter& prepared,
                                 const std::string& chatbot_model,
                                 agents::BackendPtr chatbot_backend, const LoopLimits& limits,
                                 const GenerationSetup& setup, std::uint64_t rng_seed) {
    core::Dialogue dialogue;
    dialogue.seed = prepared.starter.seed;
    dialogue.user_model = prepared.starter.user_model;
    dialogue.chatbot_model = chatbot_model;
    dialogue.judge_model = setup.judge_model;
    dialogue.rng_seed = rng_seed;
    dialogue.dialogue_id = core::make_dialogue_id(
        dialogue.seed.scene_id, dialogue.seed.persona_id, dialogue.seed.language,
        dialogue.user_model, chatbot_model, rng_seed);
    dialogue.turns.push_back(prepared.first_turn);

    const std::string session = dialogue.dialogue_id;
    while (true) {
        auto chatbot_messages = agents::render_chatbot_prompt(dialogue.turns);
        auto request = agents::ChatRequest::make(chatbot_model, setup.chatbot,
                                                 std::move(chatbot_messages), session);
        core::Turn reply;
        reply.role = core::Role::chatbot;
        reply.text = chatbot_backend->complete(request).text;
        dialogue.turns.push_back(std::move(reply));

        if (dialogue.user_turn_count() >= limits.max_user_turns) {
            dialogue.termination = core::Termination::turn_cap;
            break;
        }

        TurnOutcome outcome =
            generate_user_turn(dialogue.seed, dialogue.turns, limits, setup, session);
        if (std::holds_alternative<TurnEndOfDialogue>(outcome)) {
            dialogue.termination = core::Termination::end_flag;
            break;
        }
        if (std::holds_alternative<TurnExhausted>(outcome)) {
            // kept up to the last complete exchange, which the history
            // already ends with
            dialogue.termination = core::Termination::regeneration_exhausted;
            break;
        }
        auto& accepted = std::get<TurnAccepted>(outcome);
        core::Turn turn;
        turn.role = core::Role::user;
        turn.text = std::move(accepted.text);
        turn.attempt_count = accepted.attempts;
        turn.judge_feedback_trail = std::move(accepted.feedback_trail);
        dialogue.turns.push_back(std::move(turn));
    }
    core::validate(dialogue, limits.max_user_turns);
    return dialogue;
}

CampaignPlan::CallPlan CampaignPlan::call_plan(const LoopLimits& limits) const {
    CallPlan plan;
    plan.first_turn_user_calls = starters.size();
    plan.judge_calls = starters.size();
    const std::size_t per_dialogue_next = static_cast<std::size_t>(limits.max_user_turns - 1);
    plan.next_turn_user_calls = dialogues.size() * per_dialogue_next;
    plan.judge_calls += dialogues.size() * per_dialogue_next;
    plan.chatbot_calls = dialogues.size() * static_cast<std::size_t>(limits.max_user_turns);
    return plan;
}

CampaignPlan plan_campaign(const CampaignConfig& config, seedgen::SeedSampler& sampler) {
    config.check();
    CampaignPlan plan;
    Rng root(config.rng_seed);
    for (const auto& language : config.languages) {
        Rng lang_rng = root.fork("seeds:" + language.code);
        auto batch = sampler.sample_batch(lang_rng, language,
                                          static_cast<std::size_t>(config.scenes_per_language));
        plan.contexts.insert(plan.contexts.end(), batch.begin(), batch.end());
    }
    plan.starters = seedgen::build_starter_matrix(plan.contexts, config.user_models);
    for (const auto& starter : plan.starters) {
        for (const auto& chatbot : config.chatbot_models) {
            PlannedDialogue pd;
            pd.starter = starter;
            pd.chatbot_model = chatbot;
            pd.rng_seed = fnv1a64("dialogue\x1f" + starter.key() + "\x1f" + chatbot,
                                  config.rng_seed ^ 0x9e3779b97f4a7c15ULL);
            pd.dialogue_id = core::make_dialogue_id(starter.seed.scene_id,
                                                    starter.seed.persona_id,
                                                    starter.seed.language, starter.user_model,
                                                    chatbot, pd.rng_seed);
            plan.dialogues.push_back(std::move(pd));
        }
    }
    return plan;
}

Manifest Manifest::load(const std::filesystem::path& path) {
    Manifest manifest;
    if (!std::filesystem::exists(path)) return manifest;
    for_each_line(path, [&](std::size_t lineno, const std::string& line) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
        std::string id = j.at("dialogue_id").get<std::string>();
        std::string ts = j.value("completed_at", std::string());
        if (manifest.ids_.insert(id).second) manifest.entries_.emplace_back(id, ts);
    });
    return manifest;
}

bool Manifest::contains(const std::string& dialogue_id) const {
    return ids_.count(dialogue_id) > 0;
}

void Manifest::append(const std::string& dialogue_id) {
    if (!ids_.insert(dialogue_id).second) return;
    auto now = std::chrono::system_clock::now();
    auto secs = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    entries_.emplace_back(dialogue_id, std::to_string(secs));
}

std::string Manifest::serialize() const {
    std::string out;
    for (const auto& [id, ts] : entries_) {
        nlohmann::ordered_json j;
        j["dialogue_id"] = id;
        j["completed_at"] = ts;
        out += j.dump();
        out += "\n";
    }
    return out;
}

CampaignResult run_campaign(const CampaignConfig& config, const CampaignPlan& plan,
                            const BackendResolver& backends, const GenerationSetup& setup_base,
                            Manifest& manifest) {
    config.check();
    CampaignResult result;
    const std::size_t chatbot_count = config.chatbot_models.size();

    // one work unit per starter: the first turn is generated once and shared
    const std::size_t starter_count = plan.starters.size();
    std::vector<std::optional<core::Dialogue>> slots(plan.dialogues.size());
    std::mutex shared_mutex;  // manifest + failure/counters

    agents::BackendPtr judge_backend = backends(config.judge_model);

    parallel_for(starter_count, static_cast<std::size_t>(config.parallelism),
                 [&](std::size_t si) {
        const seedgen::Starter& starter = plan.starters[si];
        const std::size_t base = si * chatbot_count;

        std::vector<std::size_t> pending;
        for (std::size_t c = 0; c < chatbot_count; ++c) {
            const PlannedDialogue& pd = plan.dialogues[base + c];
            bool done;
            {
                std::lock_guard<std::mutex> lock(shared_mutex);
                done = manifest.contains(pd.dialogue_id);
                if (done) ++result.skipped_completed;
            }
            if (!done) pending.push_back(base + c);
        }
        if (pending.empty()) return;

        GenerationSetup setup = setup_base;
        setup.user_model = starter.user_model;
        setup.judge_model = config.judge_model;
        setup.user_backend = backends(starter.user_model);
        setup.judge_backend = judge_backend;

        PreparedStarter prepared;
        prepared.starter = starter;
        try {
            TurnOutcome first =
                generate_user_turn(starter.seed, {}, config.limits, setup, starter.key());
            if (!std::holds_alternative<TurnAccepted>(first)) {
                std::lock_guard<std::mutex> lock(shared_mutex);
                ++result.dropped_starters;
                result.failures.push_back(
                    {starter.key(), std::holds_alternative<TurnExhausted>(first)
                                        ? "first turn exhausted its attempt budget"
                                        : "first turn signalled end of dialogue"});
                return;
            }
            auto& accepted = std::get<TurnAccepted>(first);
            prepared.first_turn.role = core::Role::user;
            prepared.first_turn.text = accepted.text;
            prepared.first_turn.attempt_count = accepted.attempts;
            prepared.first_turn.judge_feedback_trail = accepted.feedback_trail;
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(shared_mutex);
            ++result.dropped_starters;
            result.failures.push_back({starter.key(), e.what()});
            return;
        }

        for (std::size_t idx : pending) {
            const PlannedDialogue& pd = plan.dialogues[idx];
            try {
                core::Dialogue dialogue =
                    generate_dialogue(prepared, pd.chatbot_model, backends(pd.chatbot_model),
                                      config.limits, setup, pd.rng_seed);
                std::lock_guard<std::mutex> lock(shared_mutex);
                manifest.append(dialogue.dialogue_id);
                slots[idx] = std::move(dialogue);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(shared_mutex);
                result.failures.push_back({pd.dialogue_id, e.what()});
            }
        }
    });

    for (auto& slot : slots)
        if (slot) result.dialogues.push_back(std::move(*slot));
    return result;
}

}  // namespace medal::orchestrator
