#include "medal/seedgen/seedgen.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include "medal/core/text.hpp"
#include "medal/util/errors.hpp"
#include "medal/util/io.hpp"

namespace medal::seedgen {

GenderLexicon GenderLexicon::defaults() {
    GenderLexicon lex;
    lex.male_tokens = {"he",      "him",     "his",     "himself", "man",  "men",
                       "boy",     "father",  "dad",     "son",     "brother", "husband",
                       "uncle",   "grandfather", "mr",  "sir",     "king", "prince"};
    lex.female_tokens = {"she",    "her",     "hers",    "herself", "woman", "women",
                         "girl",   "mother",  "mom",     "daughter", "sister", "wife",
                         "aunt",   "grandmother", "mrs", "ms",      "queen", "princess"};
    return lex;
}

AffectLexicon AffectLexicon::defaults() {
    AffectLexicon lex;
    for (const auto& state : AffectList::defaults().states)
        lex.entries.emplace_back(state.label, state.quadrant);
    // common affect words beyond the circumplex list
    const std::pair<const char*, int> extra[] = {
        {"happy", 1},  {"excited", 1}, {"thrilled", 1}, {"joyful", 1},  {"glad", 1},
        {"angry", 2},  {"scared", 2},  {"nervous", 2},  {"worried", 2}, {"upset", 2},
        {"furious", 2}, {"unhappy", 3}, {"miserable", 3}, {"exhausted", 3}, {"guilty", 3},
        {"embarrassed", 3}, {"relieved", 4}, {"thankful", 4}, {"hopeful", 1}};
    std::set<std::string> seen;
    for (auto& [label, _] : lex.entries) seen.insert(label);
    for (auto& [word, quadrant] : extra)
        if (seen.insert(word).second) lex.entries.emplace_back(word, quadrant);
    return lex;
}

AffectLexicon AffectLexicon::load(const std::filesystem::path& path) {
    AffectLexicon lex;
    std::set<std::string> seen;
    for_each_line(path, [&](std::size_t lineno, const std::string& line) {
        if (line.front() == '#') return;
        std::size_t tab = line.find('\t');
        std::string word = tab == std::string::npos ? line : line.substr(0, tab);
        int quadrant = 1;
        if (tab != std::string::npos) {
            std::string q = line.substr(tab + 1);
            auto [p, ec] = std::from_chars(q.data(), q.data() + q.size(), quadrant);
            if (ec != std::errc() || quadrant < 1 || quadrant > 4)
                throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                                  ": bad quadrant '" + q + "'");
        }
        word = core::to_lower_ascii(word);
        if (word.empty()) return;
        if (!seen.insert(word).second)
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": duplicate lexicon entry '" + word + "'");
        lex.entries.emplace_back(std::move(word), quadrant);
    });
    if (lex.empty()) throw ConfigError(path.string() + ": empty affect lexicon");
    return lex;
}

std::optional<core::AffectiveState> detect_affect(std::string_view scene_text,
                                                  const AffectLexicon& lexicon) {
    for (const auto& [word, quadrant] : lexicon.entries)
        if (core::contains_whole_word(scene_text, word))
            return core::AffectiveState{word, quadrant};
    return std::nullopt;
}

DetectedGender detect_gender(std::string_view text, const GenderLexicon& lexicon) {
    std::string lower = core::to_lower_ascii(text);
    std::string token;
    auto classify = [&](const std::string& t) -> std::optional<DetectedGender> {
        for (const auto& m : lexicon.male_tokens)
            if (t == m) return DetectedGender::male;
        for (const auto& f : lexicon.female_tokens)
            if (t == f) return DetectedGender::female;
        return std::nullopt;
    };
    for (unsigned char c : lower) {
        if (std::isalpha(c)) {
            token += static_cast<char>(c);
        } else if (!token.empty()) {
            if (auto g = classify(token)) return *g;
            token.clear();
        }
    }
    if (!token.empty())
        if (auto g = classify(token)) return *g;
    return DetectedGender::neutral;
}

namespace {

// id<TAB>text rows, '#' comments allowed.
std::vector<std::pair<std::string, std::string>> load_id_text(const std::filesystem::path& path) {
    std::vector<std::pair<std::string, std::string>> rows;
    for_each_line(path, [&](std::size_t lineno, const std::string& line) {
        if (line.front() == '#') return;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": expected id<TAB>text");
        rows.emplace_back(line.substr(0, tab), line.substr(tab + 1));
    });
    return rows;
}

}  // namespace

ScenePool ScenePool::load(const std::filesystem::path& path, const AffectLexicon& affects,
                          const GenderLexicon& genders) {
    ScenePool pool;
    std::set<std::string> ids;
    for (auto& [id, text] : load_id_text(path)) {
        if (!ids.insert(id).second)
            throw ConfigError(path.string() + ": duplicate scene_id '" + id + "'");
        Scene scene;
        scene.scene_id = id;
        scene.text = text;
        scene.detected_affect = detect_affect(text, affects);
        scene.detected_gender = detect_gender(text, genders);
        pool.scenes.push_back(std::move(scene));
    }
    if (pool.scenes.empty()) throw ConfigError(path.string() + ": empty scene pool");
    return pool;
}

std::vector<const Scene*> ScenePool::neutral_scenes() const {
    std::vector<const Scene*> out;
    for (const auto& s : scenes)
        if (s.detected_gender == DetectedGender::neutral) out.push_back(&s);
    return out;
}

PersonaPool PersonaPool::load(const std::filesystem::path& path, const GenderLexicon& genders) {
    PersonaPool pool;
    std::set<std::string> ids;
    for (auto& [id, text] : load_id_text(path)) {
        if (!ids.insert(id).second)
            throw ConfigError(path.string() + ": duplicate persona_id '" + id + "'");
        if (detect_gender(text, genders) != DetectedGender::neutral) {
            ++pool.dropped_gendered;
            continue;
        }
        pool.personas.push_back(Persona{id, text});
    }
    if (pool.personas.empty()) throw ConfigError(path.string() + ": no gender-neutral personas");
    return pool;
}

AffectList AffectList::defaults() {
    // Eight states per circumplex quadrant; replace via affects.tsv.
    AffectList list;
    const std::pair<const char*, int> states[] = {
        {"delighted", 1}, {"cheerful", 1}, {"proud", 1},     {"enthusiastic", 1},
        {"amused", 1},    {"inspired", 1}, {"confident", 1}, {"curious", 1},
        {"anxious", 2},   {"frustrated", 2}, {"annoyed", 2}, {"stressed", 2},
        {"afraid", 2},    {"alarmed", 2},  {"irritated", 2}, {"tense", 2},
        {"sad", 3},       {"bored", 3},    {"gloomy", 3},    {"tired", 3},
        {"lonely", 3},    {"disappointed", 3}, {"ashamed", 3}, {"discouraged", 3},
        {"calm", 4},      {"relaxed", 4},  {"content", 4},   {"serene", 4},
        {"peaceful", 4},  {"satisfied", 4}, {"grateful", 4}, {"comfortable", 4}};
    for (auto& [label, quadrant] : states)
        list.states.push_back(core::AffectiveState{label, quadrant});
    return list;
}

AffectList AffectList::load(const std::filesystem::path& path) {
    AffectList list;
    std::set<std::string> labels;
    for_each_line(path, [&](std::size_t lineno, const std::string& line) {
        if (line.front() == '#') return;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": expected label<TAB>quadrant");
        std::string label = core::to_lower_ascii(line.substr(0, tab));
        std::string q = line.substr(tab + 1);
        int quadrant = 0;
        auto [p, ec] = std::from_chars(q.data(), q.data() + q.size(), quadrant);
        if (ec != std::errc() || quadrant < 1 || quadrant > 4)
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": bad quadrant '" +
                              q + "'");
        if (!labels.insert(label).second)
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": duplicate affect label '" + label + "'");
        list.states.push_back(core::AffectiveState{label, quadrant});
    });
    std::array<int, 5> counts{};
    for (const auto& s : list.states) counts[s.quadrant] += 1;
    if (counts[1] == 0 || counts[1] != counts[2] || counts[2] != counts[3] ||
        counts[3] != counts[4])
        throw ConfigError(path.string() + ": affect list must have equal counts per quadrant");
    return list;
}

std::vector<const core::AffectiveState*> AffectList::in_quadrant(int quadrant) const {
    std::vector<const core::AffectiveState*> out;
    for (const auto& s : states)
        if (s.quadrant == quadrant) out.push_back(&s);
    return out;
}

std::string default_country(const core::LanguageTag& language) {
    if (language.code == "ZH") return "China";
    if (language.code == "EN") return "the United States";
    if (language.code == "FR") return "France";
    if (language.code == "DE") return "Germany";
    if (language.code == "PT") return "Portugal";
    if (language.code == "ES") return "Spain";
    return language.code;
}

SeedSampler::SeedSampler(const ScenePool& scenes, const PersonaPool& personas,
                         const AffectList& affects, std::map<std::string, std::string> countries)
    : neutral_scenes_(scenes.neutral_scenes()),
      personas_(personas),
      affects_(affects),
      countries_(std::move(countries)) {
    if (neutral_scenes_.empty()) throw ConfigError("scene pool has no gender-neutral scenes");
    if (personas_.personas.empty()) throw ConfigError("persona pool is empty");
    if (affects_.states.empty()) throw ConfigError("affect list is empty");
}

core::SeedContext SeedSampler::fill(Rng& rng, const core::LanguageTag& language,
                                    const Scene& scene) {
    core::SeedContext seed;
    seed.scene_id = scene.scene_id;
    seed.scene_text = scene.text;
    seed.language = language;
    auto it = countries_.find(language.code);
    seed.country = it != countries_.end() ? it->second : default_country(language);

    const Persona& persona = personas_.personas[rng.below(personas_.personas.size())];
    seed.persona_id = persona.persona_id;
    seed.persona_text = persona.text;

    if (scene.detected_affect) {
        seed.affective_state = *scene.detected_affect;
    } else {
        // Quadrants rotate per language so any 4k-sized batch is exactly
        // balanced; the state within the quadrant is uniform.
        int& cursor = quadrant_cursor_[language.code];
        int quadrant = cursor % 4 + 1;
        ++cursor;
        auto options = affects_.in_quadrant(quadrant);
        seed.affective_state = *options[rng.below(options.size())];
    }

    seed.gender_hint = rng.coin() ? core::GenderHint::male : core::GenderHint::female;
    return seed;
}

core::SeedContext SeedSampler::sample(Rng& rng, const core::LanguageTag& language) {
    const Scene& scene = *neutral_scenes_[rng.below(neutral_scenes_.size())];
    return fill(rng, language, scene);
}

std::vector<core::SeedContext> SeedSampler::sample_batch(Rng& rng,
                                                         const core::LanguageTag& language,
                                                         std::size_t count) {
    if (count > neutral_scenes_.size())
        throw ConfigError("requested " + std::to_string(count) + " scenes but only " +
                          std::to_string(neutral_scenes_.size()) + " gender-neutral scenes exist");
    auto picks = rng.sample_indices(neutral_scenes_.size(), count);
    std::vector<core::SeedContext> seeds;
    seeds.reserve(count);
    for (std::size_t idx : picks) seeds.push_back(fill(rng, language, *neutral_scenes_[idx]));
    return seeds;
}

std::string Starter::key() const {
    return seed.scene_id + "\x1f" + user_model + "\x1f" + seed.language.code;
}

std::vector<Starter> build_starter_matrix(const std::vector<core::SeedContext>& contexts,
                                          const std::vector<std::string>& user_models) {
    std::vector<Starter> starters;
    starters.reserve(contexts.size() * user_models.size());
    std::set<std::string> keys;
    for (const auto& context : contexts) {
        for (const auto& user_model : user_models) {
            Starter s{context, user_model};
            if (!keys.insert(s.key()).second)
                throw SchemaError("starter", "duplicate starter key for scene '" +
                                                 context.scene_id + "', user model '" +
                                                 user_model + "', language '" +
                                                 context.language.code + "'");
            starters.push_back(std::move(s));
        }
    }
    return starters;
}

}  // namespace medal::seedgen
