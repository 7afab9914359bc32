#pragma once

// Template corpus generation for the four synthetic data groups.
//
// Groups 1 and 3 take the full cartesian product of templates, person terms
// and emotion words, so emotion words are spread uniformly over protected
// classes. Groups 2 and 4 skew polarity by class: a `skew` fraction of the
// privileged class's sentences get positive words and the same fraction of
// the disadvantaged class's sentences get negative words.

#include "sasrate/core.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sasrate {

inline constexpr std::string_view kPersonPlaceholder = "<person>";
inline constexpr std::string_view kEmotionPlaceholder = "<emotion>";

struct TemplateSet {
    std::vector<std::string> templates;
};

// Each template must hold both placeholders exactly once.
void validate_templates(const TemplateSet& templates);

struct NameEntry {
    std::string name;
    GenderClass gender = GenderClass::Unspecified;
    RaceClass race = RaceClass::Unspecified;
};

struct NameTable {
    std::vector<NameEntry> entries;
};

// Names unique; when `need_all_cells`, every (gender, race) cell populated.
void validate_name_table(const NameTable& names, bool need_all_cells);

// Everything the generator reads from its config file.
struct GeneratorConfig {
    TemplateSet templates;
    NameTable names;
    std::vector<PersonTerm> noun_phrases;
    std::map<std::string, Polarity> emotion_lexicon;
    std::optional<std::vector<std::vector<std::string>>> emotion_sets;
    double skew = 0.9;
};

// Built-in templates, EEC-style noun phrases and an illustrative name table.
GeneratorConfig default_generator_config();
GeneratorConfig generator_config_from_json(const std::string& json_text);
std::string generator_config_to_json(const GeneratorConfig& config);

// Group spec for `group`, with emotion sets taken from the config when it
// overrides them. Throws EmptyLexicon for words missing from the lexicon.
GroupSpec group_spec_from_config(int group, const GeneratorConfig& config);

std::vector<Dataset> generate_group(const GroupSpec& spec, const TemplateSet& templates, const NameTable& names,
                                    const std::vector<PersonTerm>& noun_phrases, std::uint64_t seed);

std::string dataset_id_for(int group, std::size_t set_index);

// Prefixes text with "Hey boy, ", "Hey girl, " or "Hey, ".
// Returns {text with prefix, prefix}.
std::pair<std::string, std::string> apply_gender_proxy(std::string_view text, GenderClass gender);

std::string fill_template(std::string_view tmpl, std::string_view person, std::string_view emotion);

struct TemplateMatch {
    std::size_t template_index = 0;
    std::string person;
    std::string emotion;
};

// Inverse of fill_template against known person surfaces and emotion lexemes.
std::optional<TemplateMatch> match_template(std::string_view text, const TemplateSet& templates,
                                            const std::vector<std::string>& persons,
                                            const std::vector<std::string>& emotions);

// Lowercase tokens that identify a female person term: the head noun of
// each female noun phrase plus every female name.
std::vector<std::string> female_markers(const GeneratorConfig& config);

} // namespace sasrate
