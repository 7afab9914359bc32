#include "sasrate/core.hpp"

#include "sasrate/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <map>
#include <utility>

namespace sasrate {

namespace {

template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view s, const std::array<std::pair<std::string_view, Enum>, N>& table,
                std::string_view what) {
    for (const auto& [name, value] : table) {
        if (name == s) return value;
    }
    throw Error(ErrorKind::InvalidValue, "unknown " + std::string(what) + " '" + std::string(s) + "'");
}

constexpr std::array<std::pair<std::string_view, Polarity>, 2> kPolarityNames{{
    {"Negative", Polarity::Negative},
    {"Positive", Polarity::Positive},
}};
constexpr std::array<std::pair<std::string_view, GenderClass>, 3> kGenderNames{{
    {"Male", GenderClass::Male},
    {"Female", GenderClass::Female},
    {"Unspecified", GenderClass::Unspecified},
}};
constexpr std::array<std::pair<std::string_view, RaceClass>, 3> kRaceNames{{
    {"EuropeanAmerican", RaceClass::EuropeanAmerican},
    {"AfricanAmerican", RaceClass::AfricanAmerican},
    {"Unspecified", RaceClass::Unspecified},
}};
constexpr std::array<std::pair<std::string_view, Speaker>, 3> kSpeakerNames{{
    {"User", Speaker::User},
    {"Chatbot", Speaker::Chatbot},
    {"Synthetic", Speaker::Synthetic},
}};
constexpr std::array<std::pair<std::string_view, CausalNode>, 4> kNodeNames{{
    {"Gender", CausalNode::Gender},
    {"Race", CausalNode::Race},
    {"EmotionWord", CausalNode::EmotionWord},
    {"Sentiment", CausalNode::Sentiment},
}};
constexpr std::array<std::pair<std::string_view, LinkStatus>, 3> kLinkNames{{
    {"Hypothesized", LinkStatus::Hypothesized},
    {"Desirable", LinkStatus::Desirable},
    {"Undesirable", LinkStatus::Undesirable},
}};
constexpr std::array<std::pair<std::string_view, ProtectedAttribute>, 2> kAttributeNames{{
    {"Gender", ProtectedAttribute::Gender},
    {"Race", ProtectedAttribute::Race},
}};

template <typename Enum, std::size_t N>
std::string_view name_of(Enum value, const std::array<std::pair<std::string_view, Enum>, N>& table) {
    for (const auto& [name, v] : table) {
        if (v == value) return name;
    }
    return "?";
}

bool is_lowercase_token(std::string_view s) {
    return std::none_of(s.begin(), s.end(), [](unsigned char c) { return std::isupper(c) || std::isspace(c); });
}

[[noreturn]] void invalid_group(int group, const std::string& why) {
    throw Error(ErrorKind::InvalidGroup, "group " + std::to_string(group) + ": " + why);
}

CausalNode node_of(ProtectedAttribute a) {
    return a == ProtectedAttribute::Gender ? CausalNode::Gender : CausalNode::Race;
}

void validate_causal_model(const GroupSpec& spec) {
    const auto& model = spec.causal_model;
    for (const auto& edge : model.edges) {
        if (!model.nodes.contains(edge.from) || !model.nodes.contains(edge.to))
            invalid_group(spec.group, "causal edge references a node outside the model");
        if (edge.from == CausalNode::Sentiment)
            invalid_group(spec.group, "Sentiment must not have outgoing edges");
    }
    for (auto c : model.confounders) {
        if (!model.nodes.contains(c)) invalid_group(spec.group, "confounder is not a model node");
        if (c != CausalNode::Gender && c != CausalNode::Race)
            invalid_group(spec.group, "confounders must be protected attributes");
    }
    if (spec.confounded && model.confounders.empty())
        invalid_group(spec.group, "confounded group needs at least one confounder");
    if (!spec.confounded && !model.confounders.empty())
        invalid_group(spec.group, "unconfounded group must not declare confounders");
    for (auto c : model.confounders) {
        const auto attr = c == CausalNode::Gender ? ProtectedAttribute::Gender : ProtectedAttribute::Race;
        if (!spec.protected_attributes.contains(attr))
            invalid_group(spec.group, "confounder is not a protected attribute of the group");
    }
}

} // namespace

std::string_view to_string(Polarity p) { return name_of(p, kPolarityNames); }
std::string_view to_string(GenderClass g) { return name_of(g, kGenderNames); }
std::string_view to_string(RaceClass r) { return name_of(r, kRaceNames); }
std::string_view to_string(Speaker s) { return name_of(s, kSpeakerNames); }
std::string_view to_string(CausalNode n) { return name_of(n, kNodeNames); }
std::string_view to_string(LinkStatus s) { return name_of(s, kLinkNames); }
std::string_view to_string(ProtectedAttribute a) { return name_of(a, kAttributeNames); }

Polarity parse_polarity(std::string_view s) { return parse_enum(s, kPolarityNames, "polarity"); }
GenderClass parse_gender(std::string_view s) { return parse_enum(s, kGenderNames, "gender"); }
RaceClass parse_race(std::string_view s) { return parse_enum(s, kRaceNames, "race"); }
Speaker parse_speaker(std::string_view s) { return parse_enum(s, kSpeakerNames, "speaker"); }
CausalNode parse_causal_node(std::string_view s) { return parse_enum(s, kNodeNames, "causal node"); }
LinkStatus parse_link_status(std::string_view s) { return parse_enum(s, kLinkNames, "link status"); }
ProtectedAttribute parse_protected_attribute(std::string_view s) {
    return parse_enum(s, kAttributeNames, "protected attribute");
}

EmotionWord::EmotionWord(std::string lexeme_, Polarity polarity_)
    : lexeme(std::move(lexeme_)), polarity(polarity_) {
    if (lexeme.empty()) throw Error(ErrorKind::InvalidValue, "emotion word lexeme is empty");
    if (!is_lowercase_token(lexeme))
        throw Error(ErrorKind::InvalidValue, "emotion word '" + lexeme + "' must be a lowercase token");
}

std::string group_label(const GroupTag& tag) {
    if (const int* n = std::get_if<int>(&tag)) return "Group-" + std::to_string(*n);
    return std::get<std::string>(tag);
}

bool is_synthetic(const GroupTag& tag) { return std::holds_alternative<int>(tag); }

void validate_record(const SentenceRecord& r) {
    auto fail = [&](const std::string& why) {
        throw Error(ErrorKind::InvalidValue, "record '" + r.record_id + "': " + why);
    };
    if (r.record_id.empty()) fail("record_id is empty");
    if (r.dataset_id.empty()) fail("dataset_id is empty");
    if (r.text.empty()) fail("text is empty");
    if (r.person.surface.empty()) fail("person surface is empty");
    if (is_synthetic(r.group)) {
        if (!r.emotion) fail("synthetic record has no emotion word");
        if (r.person.gender == GenderClass::Unspecified) fail("synthetic record has unspecified gender");
    }
    if (!r.enhancement.empty() && !r.prefix_lost && !r.text.starts_with(r.enhancement))
        fail("text does not begin with its enhancement");
}

void validate_dataset(const Dataset& ds) {
    if (ds.records.empty()) throw Error(ErrorKind::InvalidValue, "dataset '" + ds.dataset_id + "' is empty");
    std::set<std::string_view> ids;
    for (const auto& r : ds.records) {
        validate_record(r);
        if (r.dataset_id != ds.dataset_id || r.group != ds.group)
            throw Error(ErrorKind::InvalidValue,
                        "record '" + r.record_id + "' does not belong to dataset '" + ds.dataset_id + "'");
        if (!ids.insert(r.record_id).second)
            throw Error(ErrorKind::InvalidValue, "duplicate record_id '" + r.record_id + "'");
    }
}

std::string make_record_id(std::string_view dataset_id, std::size_t index, std::size_t dataset_size) {
    std::size_t width = 4;
    for (std::size_t n = dataset_size > 0 ? dataset_size - 1 : 0; n >= 10000; n /= 10) ++width;
    std::string digits = std::to_string(index);
    if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
    return std::string(dataset_id) + "#" + digits;
}

SentimentScore::SentimentScore(double value) : value_(value) {
    if (!std::isfinite(value))
        throw Error(ErrorKind::ScoreOutOfRange, "sentiment score is not finite");
    if (value < -1.0 || value > 1.0)
        throw Error(ErrorKind::ScoreOutOfRange, "sentiment score " + std::to_string(value) + " outside [-1, 1]");
}

void validate_group_spec(const GroupSpec& spec) {
    if (spec.group < 1 || spec.group > 4) invalid_group(spec.group, "group must be 1..4");

    const bool two_attrs = spec.group >= 3;
    const std::set<ProtectedAttribute> expected =
        two_attrs ? std::set{ProtectedAttribute::Gender, ProtectedAttribute::Race}
                  : std::set{ProtectedAttribute::Gender};
    if (spec.protected_attributes != expected)
        invalid_group(spec.group, two_attrs ? "protected attributes must be {Gender, Race}"
                                            : "protected attributes must be {Gender}");

    const bool should_confound = spec.group % 2 == 0;
    if (spec.confounded != should_confound)
        invalid_group(spec.group, should_confound ? "group must be confounded" : "group must not be confounded");

    if (spec.emotion_sets.empty()) invalid_group(spec.group, "no emotion word sets");

    std::map<std::string, Polarity> seen;
    for (const auto& set : spec.emotion_sets) {
        if (set.empty()) invalid_group(spec.group, "empty emotion word set");
        bool has_pos = false;
        bool has_neg = false;
        for (const auto& w : set) {
            if (w.lexeme.empty() || !is_lowercase_token(w.lexeme))
                invalid_group(spec.group, "emotion word '" + w.lexeme + "' is not a lowercase token");
            auto [it, inserted] = seen.emplace(w.lexeme, w.polarity);
            if (!inserted && it->second != w.polarity)
                invalid_group(spec.group, "emotion word '" + w.lexeme + "' has two polarities");
            (w.polarity == Polarity::Positive ? has_pos : has_neg) = true;
        }
        if (spec.confounded && !(has_pos && has_neg))
            invalid_group(spec.group, "confounded emotion set must contain both polarities");
    }

    if (spec.confounded && !(spec.skew >= 0.5 && spec.skew <= 1.0))
        invalid_group(spec.group, "skew must lie in [0.5, 1.0]");

    validate_causal_model(spec);
}

CausalModelSpec default_causal_model(int group) {
    CausalModelSpec model;
    std::vector<ProtectedAttribute> attrs{ProtectedAttribute::Gender};
    if (group >= 3) attrs.push_back(ProtectedAttribute::Race);
    const bool confounded = group % 2 == 0;

    model.nodes = {CausalNode::EmotionWord, CausalNode::Sentiment};
    for (auto a : attrs) model.nodes.insert(node_of(a));

    model.edges.push_back({CausalNode::EmotionWord, CausalNode::Sentiment,
                           confounded ? LinkStatus::Hypothesized : LinkStatus::Desirable});
    for (auto a : attrs) {
        model.edges.push_back({node_of(a), CausalNode::Sentiment, LinkStatus::Hypothesized});
        if (confounded) {
            model.edges.push_back({node_of(a), CausalNode::EmotionWord, LinkStatus::Undesirable});
            model.confounders.insert(node_of(a));
        }
    }
    return model;
}

GroupSpec default_group_spec(int group, double skew) {
    if (group < 1 || group > 4) invalid_group(group, "group must be 1..4");
    const EmotionWord grim{"grim", Polarity::Negative};
    const EmotionWord depressing{"depressing", Polarity::Negative};
    const EmotionWord happy{"happy", Polarity::Positive};
    const EmotionWord glad{"glad", Polarity::Positive};

    GroupSpec spec;
    spec.group = group;
    spec.protected_attributes = {ProtectedAttribute::Gender};
    if (group >= 3) spec.protected_attributes.insert(ProtectedAttribute::Race);
    spec.confounded = group % 2 == 0;
    spec.skew = skew;
    if (!spec.confounded) {
        spec.emotion_sets = {{grim}, {happy}, {grim, happy}, {grim, depressing, happy}, {depressing, happy, glad}};
    } else {
        spec.emotion_sets = {{grim, happy}, {grim, depressing, happy}, {depressing, happy, glad}};
    }
    spec.causal_model = default_causal_model(group);
    return spec;
}

} // namespace sasrate
