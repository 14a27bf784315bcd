#pragma once

#include <string>
#include <vector>

#include "medal/agents/backend.hpp"
#include "medal/core/types.hpp"

namespace medal::metaeval {

enum class PreferenceOutcome { win_a, win_b, tie };

std::string_view preference_outcome_name(PreferenceOutcome outcome);

struct PreferenceTrial {
    PreferenceOutcome outcome = PreferenceOutcome::tie;
    bool protocol_error = false;  // a trial reply was unusable; forced tie
};

/// Default comparison criterion: cultural appropriateness and naturalness.
std::string default_preference_criterion();

/// Judges a dialogue pair sharing a seed context under the given criterion.
/// The comparison runs twice with presentation order reversed; a win
/// requires the same dialogue preferred in both trials, anything else is a
/// tie. The judge must answer with the single letter A or B.
PreferenceTrial pairwise_preference_trial(const core::Dialogue& dialogue_a,
                                          const core::Dialogue& dialogue_b,
                                          const std::string& criterion_prompt,
                                          agents::ChatBackend& backend,
                                          const std::string& judge_model);

struct PreferenceSummary {
    std::size_t pairs = 0;
    std::size_t win_a = 0;
    std::size_t win_b = 0;
    std::size_t tie = 0;
    std::size_t protocol_errors = 0;
};

}  // namespace medal::metaeval
