#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "medal/agents/backend.hpp"
#include "medal/agents/prompts.hpp"
#include "medal/core/types.hpp"
#include "medal/seedgen/seedgen.hpp"

namespace medal::orchestrator {

/// Regeneration and length limits for the per-turn feedback loop.
struct LoopLimits {
    int first_turn_attempts = 10;
    int next_turn_attempts = 5;
    int max_user_turns = 10;

    void check() const;
};

/// The model/backend bindings and protocol knobs one generation run uses.
struct GenerationSetup {
    std::string user_model;
    std::string judge_model;
    agents::BackendPtr user_backend;
    agents::BackendPtr judge_backend;
    agents::FewShotExamples fewshot = agents::FewShotExamples::defaults();
    bool end_flag_substring = false;  // END_OF_DIALOGUE matching mode
    bool lenient_verdicts = false;
    agents::DecodingProfile user_first = agents::DecodingProfile::standard(agents::ProfileName::user_first);
    agents::DecodingProfile user_next = agents::DecodingProfile::standard(agents::ProfileName::user_next);
    agents::DecodingProfile user_judge = agents::DecodingProfile::standard(agents::ProfileName::user_judge);
    agents::DecodingProfile chatbot = agents::DecodingProfile::standard(agents::ProfileName::chatbot);
};

struct TurnAccepted {
    std::string text;
    int attempts = 1;
    std::vector<std::string> feedback_trail;
};
struct TurnEndOfDialogue {};
struct TurnExhausted {
    std::vector<std::string> feedback_trail;
};

using TurnOutcome = std::variant<TurnAccepted, TurnEndOfDialogue, TurnExhausted>;

/// One pass of the render -> complete -> judge loop for the next user turn.
/// History must be empty (first turn) or end with a chatbot turn. An output
/// equal to the end flag short-circuits without judging. Rejected attempts
/// re-render with the rejected text and the judge's feedback; the attempt
/// limit depends on whether this is the first turn.
TurnOutcome generate_user_turn(const core::SeedContext& seed,
                               const std::vector<core::Turn>& history, const LoopLimits& limits,
                               const GenerationSetup& setup, const std::string& session);

/// Everything needed to spawn dialogues for one starter: the seed plus the
/// accepted first user turn (shared across chatbots).
struct PreparedStarter {
    seedgen::Starter starter;
    core::Turn first_turn;  // role = user
};

/// Runs one dialogue against one chatbot. Alternates chatbot response and
/// judged user turn until the user-turn cap, an end flag, or regeneration
/// exhaustion (the dialogue is kept up to the last complete exchange and
/// marked, never deleted).
core::Dialogue generate_dialogue(const PreparedStarter& prepared,
                                 const std::string& chatbot_model,
                                 agents::BackendPtr chatbot_backend, const LoopLimits& limits,
                                 const GenerationSetup& setup, std::uint64_t rng_seed);

// ---------------------------------------------------------------------------
// Campaign
// ---------------------------------------------------------------------------

struct CampaignConfig {
    std::vector<std::string> user_models;
    std::vector<std::string> chatbot_models;
    std::string judge_model;
    std::vector<core::LanguageTag> languages;
    int scenes_per_language = 0;
    LoopLimits limits;
    int parallelism = 1;
    std::uint64_t rng_seed = 0;

    void check() const;
};

/// Resolves the backend serving a given model id.
using BackendResolver = std::function<agents::BackendPtr(const std::string& model)>;

struct PlannedDialogue {
    seedgen::Starter starter;
    std::string chatbot_model;
    std::uint64_t rng_seed = 0;
    std::string dialogue_id;
};

struct CampaignPlan {
    std::vector<core::SeedContext> contexts;
    std::vector<seedgen::Starter> starters;
    std::vector<PlannedDialogue> dialogues;

    struct CallPlan {
        std::size_t first_turn_user_calls = 0;
        std::size_t next_turn_user_calls = 0;
        std::size_t judge_calls = 0;
        std::size_t chatbot_calls = 0;
        std::size_t total() const {
            return first_turn_user_calls + next_turn_user_calls + judge_calls + chatbot_calls;
        }
    };

    /// Backend-call counts assuming every attempt is accepted and no dialogue
    /// ends early; this is what --dry-run prints and what an always-accepting
    /// judge produces exactly.
    CallPlan call_plan(const LoopLimits& limits) const;
};

/// Deterministic plan: seed contexts, the starter matrix, and the
/// per-dialogue rng seeds / content-derived ids.
CampaignPlan plan_campaign(const CampaignConfig& config, seedgen::SeedSampler& sampler);

struct FailedUnit {
    std::string key;  // starter key or dialogue id
    std::string error;
};

struct CampaignResult {
    std::vector<core::Dialogue> dialogues;  // plan order
    std::vector<FailedUnit> failures;
    std::size_t skipped_completed = 0;  // manifest hits
    std::size_t dropped_starters = 0;   // first turn exhausted or ended
};

/// The append-only record of completed dialogue ids; re-running a campaign
/// skips ids already present.
class Manifest {
public:
    static Manifest load(const std::filesystem::path& path);

    bool contains(const std::string& dialogue_id) const;
    void append(const std::string& dialogue_id);
    const std::set<std::string>& ids() const { return ids_; }
    std::string serialize() const;

private:
    std::set<std::string> ids_;
    std::vector<std::pair<std::string, std::string>> entries_;  // id, timestamp
};

/// Executes the plan with a bounded worker pool. First user turns are
/// generated once per starter and shared across that starter's chatbots;
/// starters whose first turn exhausts its attempt budget are dropped and
/// reported. Backend failures are collected per dialogue, not fatal.
CampaignResult run_campaign(const CampaignConfig& config, const CampaignPlan& plan,
                            const BackendResolver& backends, const GenerationSetup& setup_base,
                            Manifest& manifest);

}  // namespace medal::orchestrator
