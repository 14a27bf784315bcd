#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "medal/core/types.hpp"
#include "medal/util/rng.hpp"

namespace medal::seedgen {

enum class DetectedGender { male, female, neutral };

/// Token lists used by the rule-based gender scan. Defaults cover common
/// English pronouns and kinship terms; both lists are replaceable.
struct GenderLexicon {
    std::vector<std::string> male_tokens;
    std::vector<std::string> female_tokens;

    static GenderLexicon defaults();
};

/// Affect keyword list: lowercase word -> circumplex quadrant (1..4).
/// Entries without a known quadrant default to 1.
struct AffectLexicon {
    // Ordered: detection returns the first entry that matches.
    std::vector<std::pair<std::string, int>> entries;

    static AffectLexicon defaults();
    static AffectLexicon load(const std::filesystem::path& path);
    bool empty() const { return entries.empty(); }
};

/// Whole-word scan for the first lexicon entry present in the text,
/// case-insensitive. Total: returns nullopt when nothing matches.
std::optional<core::AffectiveState> detect_affect(std::string_view scene_text,
                                                  const AffectLexicon& lexicon);

/// Rule-based scan: male/female iff a gendered token occurs (first gendered
/// token in text order decides), neutral otherwise.
DetectedGender detect_gender(std::string_view text, const GenderLexicon& lexicon);

inline DetectedGender detect_gender(std::string_view text) {
    return detect_gender(text, GenderLexicon::defaults());
}

struct Scene {
    std::string scene_id;
    std::string text;
    std::optional<core::AffectiveState> detected_affect;
    DetectedGender detected_gender = DetectedGender::neutral;
};

struct ScenePool {
    std::vector<Scene> scenes;

    /// Loads id<TAB>text rows; affect and gender detection run at load time.
    static ScenePool load(const std::filesystem::path& path, const AffectLexicon& affects,
                          const GenderLexicon& genders = GenderLexicon::defaults());

    /// Scenes whose rule-based scan found no gendered token.
    std::vector<const Scene*> neutral_scenes() const;
};

struct Persona {
    std::string persona_id;
    std::string text;
};

struct PersonaPool {
    std::vector<Persona> personas;
    std::size_t dropped_gendered = 0;  // rows removed by the neutrality scan

    static PersonaPool load(const std::filesystem::path& path,
                            const GenderLexicon& genders = GenderLexicon::defaults());
};

struct AffectList {
    std::vector<core::AffectiveState> states;

    /// label<TAB>quadrant rows; enforces unique labels and equal counts per
    /// quadrant.
    static AffectList load(const std::filesystem::path& path);
    static AffectList defaults();

    std::vector<const core::AffectiveState*> in_quadrant(int quadrant) const;
};

/// Country framing used by the prompts, per language.
std::string default_country(const core::LanguageTag& language);

/// Draws seed contexts. Affect falls back to a per-language round-robin over
/// circumplex quadrants when the scene does not carry one, which makes
/// quadrant counts exactly balanced over any batch of size 4k. Deterministic
/// given the seed of the Rng handed in.
class SeedSampler {
public:
    SeedSampler(const ScenePool& scenes, const PersonaPool& personas, const AffectList& affects,
                std::map<std::string, std::string> countries = {});

    core::SeedContext sample(Rng& rng, const core::LanguageTag& language);

    /// Distinct scenes (no replacement) for one language batch; persona,
    /// affect and gender sampled per scene as in sample().
    std::vector<core::SeedContext> sample_batch(Rng& rng, const core::LanguageTag& language,
                                                std::size_t count);

private:
    core::SeedContext fill(Rng& rng, const core::LanguageTag& language, const Scene& scene);

    std::vector<const Scene*> neutral_scenes_;
    const PersonaPool& personas_;
    const AffectList& affects_;
    std::map<std::string, std::string> countries_;
    std::map<std::string, int> quadrant_cursor_;  // per language code
};

/// One planned conversation starter: a seed context bound to the user model
/// that will open the conversation.
struct Starter {
    core::SeedContext seed;
    std::string user_model;

    std::string key() const;  // (scene_id, user_model, language)
};

/// Cross product of contexts and user models; throws on duplicate
/// (scene_id, user_model, language) keys. |result| = scenes x users x langs
/// when contexts hold one entry per (scene, language).
std::vector<Starter> build_starter_matrix(const std::vector<core::SeedContext>& contexts,
                                          const std::vector<std::string>& user_models);

}  // namespace medal::seedgen
