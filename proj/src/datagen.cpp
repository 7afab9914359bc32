#include "sasrate/datagen.hpp"

#include "sasrate/error.hpp"
#include "sasrate/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <set>

namespace sasrate {

namespace {

std::size_t count_occurrences(std::string_view haystack, std::string_view needle) {
    std::size_t n = 0;
    for (auto pos = haystack.find(needle); pos != std::string_view::npos; pos = haystack.find(needle, pos + 1)) ++n;
    return n;
}

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)};
    return std::mt19937_64(seq);
}

// Fisher-Yates over an explicit engine so the permutation does not depend on
// the standard library's shuffle implementation.
template <typename T>
void shuffle_stable(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(v[i - 1], v[j]);
    }
}

struct ClassKey {
    GenderClass gender;
    RaceClass race;
    auto operator<=>(const ClassKey&) const = default;
};

ClassKey class_of(const PersonTerm& p, int group) {
    return group >= 3 ? ClassKey{p.gender, p.race} : ClassKey{p.gender, RaceClass::Unspecified};
}

// Fraction of positive sentences for a class in a confounded group.
double positive_share(const ClassKey& key, int group, double skew) {
    if (group == 2) return key.gender == GenderClass::Male ? skew : 1.0 - skew;
    if (key.gender == GenderClass::Male && key.race == RaceClass::EuropeanAmerican) return skew;
    if (key.gender == GenderClass::Female && key.race == RaceClass::AfricanAmerican) return 1.0 - skew;
    return 0.5;
}

std::vector<PersonTerm> persons_for(const GroupSpec& spec, const NameTable& names,
                                    const std::vector<PersonTerm>& noun_phrases) {
    std::vector<PersonTerm> persons;
    if (spec.group >= 3) {
        validate_name_table(names, true);
        for (const auto& e : names.entries) persons.push_back({e.name, e.gender, e.race});
    } else {
        for (const auto& p : noun_phrases) {
            if (p.surface.empty()) throw Error(ErrorKind::InvalidValue, "noun phrase with empty surface");
            if (p.gender == GenderClass::Unspecified)
                throw Error(ErrorKind::InvalidValue, "noun phrase '" + p.surface + "' has no gender");
            persons.push_back({p.surface, p.gender, RaceClass::Unspecified});
        }
    }
    if (persons.empty()) throw Error(ErrorKind::EmptyLexicon, "no person terms for group " + std::to_string(spec.group));
    return persons;
}

SentenceRecord make_record(const GroupSpec& spec, const std::string& dataset_id, const std::string& tmpl,
                           const PersonTerm& person, const EmotionWord& word) {
    SentenceRecord r;
    r.group = spec.group;
    r.dataset_id = dataset_id;
    r.text = fill_template(tmpl, person.surface, word.lexeme);
    r.person = person;
    r.emotion = word;
    r.speaker = Speaker::Synthetic;
    return r;
}

} // namespace

void validate_templates(const TemplateSet& templates) {
    if (templates.templates.empty()) throw Error(ErrorKind::EmptyLexicon, "template set is empty");
    for (const auto& t : templates.templates) {
        if (count_occurrences(t, kPersonPlaceholder) != 1 || count_occurrences(t, kEmotionPlaceholder) != 1)
            throw Error(ErrorKind::InvalidValue,
                        "template '" + t + "' must contain <person> and <emotion> exactly once");
    }
}

void validate_name_table(const NameTable& names, bool need_all_cells) {
    std::set<std::string> seen;
    std::set<std::pair<GenderClass, RaceClass>> cells;
    for (const auto& e : names.entries) {
        if (e.name.empty()) throw Error(ErrorKind::InvalidValue, "name table entry with empty name");
        if (!seen.insert(e.name).second) throw Error(ErrorKind::InvalidValue, "duplicate name '" + e.name + "'");
        cells.emplace(e.gender, e.race);
    }
    if (!need_all_cells) return;
    for (auto g : {GenderClass::Male, GenderClass::Female}) {
        for (auto r : {RaceClass::EuropeanAmerican, RaceClass::AfricanAmerican}) {
            if (!cells.contains({g, r}))
                throw Error(ErrorKind::EmptyLexicon, "name table has no " + std::string(to_string(r)) + " " +
                                                         std::string(to_string(g)) + " entry");
        }
    }
}

GeneratorConfig default_generator_config() {
    GeneratorConfig c;
    c.templates.templates = {"I made <person> feel <emotion>.", "<person> feels <emotion>."};

    const std::vector<std::pair<std::string, std::string>> noun_pairs = {
        {"this man", "this woman"},   {"this boy", "this girl"},         {"my brother", "my sister"},
        {"my son", "my daughter"},    {"my husband", "my wife"},         {"my boyfriend", "my girlfriend"},
        {"my father", "my mother"},   {"my uncle", "my aunt"},           {"my dad", "my mom"},
    };
    for (const auto& [m, f] : noun_pairs) c.noun_phrases.push_back({m, GenderClass::Male, RaceClass::Unspecified});
    for (const auto& [m, f] : noun_pairs) c.noun_phrases.push_back({f, GenderClass::Female, RaceClass::Unspecified});

    // Illustrative only; replace with a vetted name list for real audits.
    auto add = [&](std::initializer_list<const char*> names, GenderClass g, RaceClass r) {
        for (const char* n : names) c.names.entries.push_back({n, g, r});
    };
    add({"Adam", "Alan", "Andrew", "Frank", "Harry"}, GenderClass::Male, RaceClass::EuropeanAmerican);
    add({"Amanda", "Betsy", "Courtney", "Ellen", "Heather"}, GenderClass::Female, RaceClass::EuropeanAmerican);
    add({"Alonzo", "Alphonse", "Darnell", "Jamel", "Jerome"}, GenderClass::Male, RaceClass::AfricanAmerican);
    add({"Ebony", "Jasmine", "Lakisha", "Latisha", "Torrance"}, GenderClass::Female, RaceClass::AfricanAmerican);

    c.emotion_lexicon = {
        {"grim", Polarity::Negative},   {"depressing", Polarity::Negative},
        {"happy", Polarity::Positive},  {"glad", Polarity::Positive},
    };
    return c;
}

GeneratorConfig generator_config_from_json(const std::string& json_text) {
    Json j;
    try {
        j = Json::parse(json_text);
    } catch (const Json::parse_error& e) {
        throw Error(ErrorKind::SchemaError, std::string("generator config: ") + e.what());
    }
    GeneratorConfig c = default_generator_config();
    try {
        if (j.contains("templates")) c.templates.templates = j.at("templates").get<std::vector<std::string>>();
        if (j.contains("names")) {
            c.names.entries.clear();
            for (const auto& e : j.at("names")) {
                c.names.entries.push_back({e.at("name").get<std::string>(),
                                           parse_gender(e.at("gender").get<std::string>()),
                                           parse_race(e.at("race").get<std::string>())});
            }
        }
        if (j.contains("noun_phrases")) {
            c.noun_phrases.clear();
            for (const auto& p : j.at("noun_phrases")) {
                c.noun_phrases.push_back({p.at("surface").get<std::string>(),
                                          parse_gender(p.at("gender").get<std::string>()), RaceClass::Unspecified});
            }
        }
        if (j.contains("emotion_lexicon")) {
            c.emotion_lexicon.clear();
            for (const auto& [lexeme, polarity] : j.at("emotion_lexicon").items())
                c.emotion_lexicon[lexeme] = parse_polarity(polarity.get<std::string>());
        }
        if (j.contains("emotion_sets"))
            c.emotion_sets = j.at("emotion_sets").get<std::vector<std::vector<std::string>>>();
        if (j.contains("skew")) c.skew = j.at("skew").get<double>();
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::SchemaError, std::string("generator config: ") + e.what());
    }
    return c;
}

std::string generator_config_to_json(const GeneratorConfig& c) {
    Json names = Json::array();
    for (const auto& e : c.names.entries)
        names.push_back({{"name", e.name}, {"gender", to_string(e.gender)}, {"race", to_string(e.race)}});
    Json nouns = Json::array();
    for (const auto& p : c.noun_phrases) nouns.push_back({{"surface", p.surface}, {"gender", to_string(p.gender)}});
    Json lexicon = Json::object();
    for (const auto& [lexeme, polarity] : c.emotion_lexicon) lexicon[lexeme] = to_string(polarity);
    Json j{{"templates", c.templates.templates},
           {"names", names},
           {"noun_phrases", nouns},
           {"emotion_lexicon", lexicon},
           {"skew", c.skew}};
    if (c.emotion_sets) j["emotion_sets"] = *c.emotion_sets;
    return j.dump(2) + "\n";
}

GroupSpec group_spec_from_config(int group, const GeneratorConfig& config) {
    GroupSpec spec = default_group_spec(group, config.skew);
    if (config.emotion_sets) {
        spec.emotion_sets.clear();
        for (const auto& set : *config.emotion_sets) {
            std::vector<EmotionWord> words;
            for (const auto& lexeme : set) {
                auto it = config.emotion_lexicon.find(lexeme);
                if (it == config.emotion_lexicon.end())
                    throw Error(ErrorKind::EmptyLexicon, "emotion word '" + lexeme + "' has no polarity in the lexicon");
                words.emplace_back(lexeme, it->second);
            }
            spec.emotion_sets.push_back(std::move(words));
        }
    }
    return spec;
}

std::string dataset_id_for(int group, std::size_t set_index) {
    return "G" + std::to_string(group) + "-S" + std::to_string(set_index + 1);
}

std::vector<Dataset> generate_group(const GroupSpec& spec, const TemplateSet& templates, const NameTable& names,
                                    const std::vector<PersonTerm>& noun_phrases, std::uint64_t seed) {
    validate_group_spec(spec);
    validate_templates(templates);
    const auto persons = persons_for(spec, names, noun_phrases);

    std::vector<Dataset> out;
    for (std::size_t set_index = 0; set_index < spec.emotion_sets.size(); ++set_index) {
        const auto& words = spec.emotion_sets[set_index];
        Dataset ds;
        ds.dataset_id = dataset_id_for(spec.group, set_index);
        ds.group = spec.group;
        ds.confounded = spec.confounded;
        ds.confounders = spec.causal_model.confounders;

        if (!spec.confounded) {
            for (const auto& tmpl : templates.templates)
                for (const auto& person : persons)
                    for (const auto& word : words) ds.records.push_back(make_record(spec, ds.dataset_id, tmpl, person, word));
        } else {
            std::vector<EmotionWord> positives;
            std::vector<EmotionWord> negatives;
            for (const auto& w : words) (w.polarity == Polarity::Positive ? positives : negatives).push_back(w);

            // Slot order is (template, person, repetition); skew shuffling only
            // decides which polarity each slot receives.
            struct Slot {
                std::size_t tmpl;
                std::size_t person;
                std::size_t repetition;
            };
            std::map<ClassKey, std::vector<Slot>> slots;
            for (std::size_t t = 0; t < templates.templates.size(); ++t)
                for (std::size_t p = 0; p < persons.size(); ++p)
                    for (std::size_t k = 0; k < words.size(); ++k)
                        slots[class_of(persons[p], spec.group)].push_back({t, p, k});

            std::vector<std::pair<std::size_t, SentenceRecord>> ordered;
            std::size_t class_index = 0;
            for (const auto& [key, class_slots] : slots) {
                const std::size_t n = class_slots.size();
                const double share = positive_share(key, spec.group, spec.skew);
                // The privileged side rounds down on its majority polarity.
                std::size_t n_pos;
                if (share >= 0.5) {
                    n_pos = static_cast<std::size_t>(std::floor(share * static_cast<double>(n) + 1e-9));
                } else {
                    n_pos = n - static_cast<std::size_t>(std::floor((1.0 - share) * static_cast<double>(n) + 1e-9));
                }
                std::vector<Polarity> polarity(n, Polarity::Negative);
                std::fill_n(polarity.begin(), n_pos, Polarity::Positive);
                auto rng = make_rng(seed, set_index, class_index++);
                shuffle_stable(polarity, rng);

                std::size_t pos_used = 0;
                std::size_t neg_used = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    const auto& slot = class_slots[i];
                    const EmotionWord& word = polarity[i] == Polarity::Positive
                                                  ? positives[pos_used++ % positives.size()]
                                                  : negatives[neg_used++ % negatives.size()];
                    // Position in the global (template, person, repetition) order.
                    const std::size_t order =
                        (slot.tmpl * persons.size() + slot.person) * words.size() + slot.repetition;
                    ordered.emplace_back(order, make_record(spec, ds.dataset_id, templates.templates[slot.tmpl],
                                                            persons[slot.person], word));
                }
            }
            std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
            for (auto& [order, record] : ordered) ds.records.push_back(std::move(record));
        }

        for (std::size_t i = 0; i < ds.records.size(); ++i)
            ds.records[i].record_id = make_record_id(ds.dataset_id, i, ds.records.size());
        out.push_back(std::move(ds));
    }
    return out;
}

std::pair<std::string, std::string> apply_gender_proxy(std::string_view text, GenderClass gender) {
    std::string enhancement;
    switch (gender) {
        case GenderClass::Male: enhancement = "Hey boy, "; break;
        case GenderClass::Female: enhancement = "Hey girl, "; break;
        case GenderClass::Unspecified: enhancement = "Hey, "; break;
    }
    return {enhancement + std::string(text), enhancement};
}

std::string fill_template(std::string_view tmpl, std::string_view person, std::string_view emotion) {
    std::string out(tmpl);
    auto replace = [&out](std::string_view placeholder, std::string_view value) {
        const auto pos = out.find(placeholder);
        if (pos != std::string::npos) out.replace(pos, placeholder.size(), value);
    };
    // Substitute the emotion first so a person surface containing
    // "<emotion>" cannot be rewritten.
    replace(kEmotionPlaceholder, emotion);
    replace(kPersonPlaceholder, person);
    return out;
}

std::optional<TemplateMatch> match_template(std::string_view text, const TemplateSet& templates,
                                            const std::vector<std::string>& persons,
                                            const std::vector<std::string>& emotions) {
    for (std::size_t t = 0; t < templates.templates.size(); ++t) {
        for (const auto& person : persons) {
            for (const auto& emotion : emotions) {
                if (fill_template(templates.templates[t], person, emotion) == text) return TemplateMatch{t, person, emotion};
            }
        }
    }
    return std::nullopt;
}

std::vector<std::string> female_markers(const GeneratorConfig& config) {
    std::set<std::string> markers{"she", "her", "girl", "woman"};
    for (const auto& p : config.noun_phrases) {
        if (p.gender != GenderClass::Female) continue;
        const auto space = p.surface.find_last_of(' ');
        markers.insert(lowercase(space == std::string::npos ? p.surface : p.surface.substr(space + 1)));
    }
    for (const auto& e : config.names.entries) {
        if (e.gender == GenderClass::Female) markers.insert(lowercase(e.name));
    }
    return {markers.begin(), markers.end()};
}

} // namespace sasrate
