#pragma once

// Domain types shared by every module: protected attributes, emotion words,
// sentence records, sentiment scores and the per-group causal description.

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sasrate {

enum class Polarity { Negative, Positive };
enum class GenderClass { Male, Female, Unspecified };
enum class RaceClass { EuropeanAmerican, AfricanAmerican, Unspecified };
enum class Speaker { User, Chatbot, Synthetic };

// Nodes of the rating causal model.
enum class CausalNode { Gender, Race, EmotionWord, Sentiment };
enum class LinkStatus { Hypothesized, Desirable, Undesirable };
enum class ProtectedAttribute { Gender, Race };

inline constexpr Polarity kPolarities[] = {Polarity::Negative, Polarity::Positive};

std::string_view to_string(Polarity p);
std::string_view to_string(GenderClass g);
std::string_view to_string(RaceClass r);
std::string_view to_string(Speaker s);
std::string_view to_string(CausalNode n);
std::string_view to_string(LinkStatus s);
std::string_view to_string(ProtectedAttribute a);

// Parsers throw Error(InvalidValue) on unknown names.
Polarity parse_polarity(std::string_view s);
GenderClass parse_gender(std::string_view s);
RaceClass parse_race(std::string_view s);
Speaker parse_speaker(std::string_view s);
CausalNode parse_causal_node(std::string_view s);
LinkStatus parse_link_status(std::string_view s);
ProtectedAttribute parse_protected_attribute(std::string_view s);

struct EmotionWord {
    std::string lexeme;
    Polarity polarity = Polarity::Negative;

    EmotionWord() = default;
    EmotionWord(std::string lexeme, Polarity polarity);

    friend auto operator<=>(const EmotionWord&, const EmotionWord&) = default;
};

struct PersonTerm {
    std::string surface;
    GenderClass gender = GenderClass::Unspecified;
    RaceClass race = RaceClass::Unspecified;

    friend auto operator<=>(const PersonTerm&, const PersonTerm&) = default;
};

// Synthetic groups carry their number (1..4); ingested corpora carry a tag
// such as "HD1".
using GroupTag = std::variant<int, std::string>;

std::string group_label(const GroupTag& tag);
bool is_synthetic(const GroupTag& tag);

struct SentenceRecord {
    std::string record_id;
    GroupTag group = 1;
    std::string dataset_id;
    std::string text;
    std::string enhancement;
    PersonTerm person;
    std::optional<EmotionWord> emotion;
    Speaker speaker = Speaker::Synthetic;
    // Set when a round trip rewrote the gender-proxy prefix.
    bool prefix_lost = false;

    friend bool operator==(const SentenceRecord&, const SentenceRecord&) = default;
};

// Throws Error(InvalidValue) when a record invariant does not hold.
void validate_record(const SentenceRecord& record);

std::string make_record_id(std::string_view dataset_id, std::size_t index, std::size_t dataset_size);

class SentimentScore {
public:
    // Rejects NaN, infinities and values outside [-1, 1].
    explicit SentimentScore(double value);

    double value() const noexcept { return value_; }

    friend bool operator==(const SentimentScore&, const SentimentScore&) = default;

private:
    double value_;
};

struct ScoredRecord {
    std::string record_id;
    std::string sas_id;
    SentimentScore score{0.0};

    friend bool operator==(const ScoredRecord&, const ScoredRecord&) = default;
};

// Where a derived dataset came from (round-trip translation).
struct Provenance {
    std::string source_dataset_id;
    std::string pivot;
    std::string engine;

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct Dataset {
    std::string dataset_id;
    GroupTag group = 1;
    bool confounded = false;
    std::set<CausalNode> confounders;
    std::vector<SentenceRecord> records;
    std::optional<Provenance> provenance;

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

// Nonempty, every record shares the dataset's group and id, ids unique.
void validate_dataset(const Dataset& ds);

struct CausalEdge {
    CausalNode from;
    CausalNode to;
    LinkStatus status;

    friend bool operator==(const CausalEdge&, const CausalEdge&) = default;
};

struct CausalModelSpec {
    std::set<CausalNode> nodes;
    std::vector<CausalEdge> edges;
    std::set<CausalNode> confounders;

    friend bool operator==(const CausalModelSpec&, const CausalModelSpec&) = default;
};

struct GroupSpec {
    int group = 1;
    std::set<ProtectedAttribute> protected_attributes;
    bool confounded = false;
    std::vector<std::vector<EmotionWord>> emotion_sets;
    double skew = 0.9;
    CausalModelSpec causal_model;

    friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

// Throws Error(InvalidGroup) naming the first invariant that fails.
void validate_group_spec(const GroupSpec& spec);

// Causal model for a group: protected attributes and emotion word feed
// sentiment; confounded groups add protected -> emotion word links.
CausalModelSpec default_causal_model(int group);

// Group definitions with the default emotion word sets.
GroupSpec default_group_spec(int group, double skew = 0.9);

} // namespace sasrate
