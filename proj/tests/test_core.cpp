#include "helpers.hpp"

#include "sasrate/core.hpp"

#include <cmath>
#include <limits>

using namespace sasrate;

TEST_CASE("enum names round trip") {
    for (auto g : {GenderClass::Male, GenderClass::Female, GenderClass::Unspecified})
        CHECK(parse_gender(to_string(g)) == g);
    for (auto r : {RaceClass::EuropeanAmerican, RaceClass::AfricanAmerican, RaceClass::Unspecified})
        CHECK(parse_race(to_string(r)) == r);
    for (auto n : {CausalNode::Gender, CausalNode::Race, CausalNode::EmotionWord, CausalNode::Sentiment})
        CHECK(parse_causal_node(to_string(n)) == n);
    CHECK(parse_speaker("Chatbot") == Speaker::Chatbot);
    CHECK(parse_polarity("Positive") == Polarity::Positive);
    CHECK_KIND(parse_gender("male"), ErrorKind::InvalidValue);
    CHECK_KIND(parse_polarity(""), ErrorKind::InvalidValue);
}

TEST_CASE("emotion words are nonempty lowercase tokens") {
    CHECK_NOTHROW(EmotionWord("grim", Polarity::Negative));
    CHECK_KIND(EmotionWord("", Polarity::Negative), ErrorKind::InvalidValue);
    CHECK_KIND(EmotionWord("Grim", Polarity::Negative), ErrorKind::InvalidValue);
    CHECK_KIND(EmotionWord("very grim", Polarity::Negative), ErrorKind::InvalidValue);
}

TEST_CASE("sentiment scores stay in [-1, 1]") {
    CHECK(SentimentScore(-1.0).value() == -1.0);
    CHECK(SentimentScore(1.0).value() == 1.0);
    CHECK_KIND(SentimentScore(1.5), ErrorKind::ScoreOutOfRange);
    CHECK_KIND(SentimentScore(-1.0000001), ErrorKind::ScoreOutOfRange);
    CHECK_KIND(SentimentScore(std::nan("")), ErrorKind::ScoreOutOfRange);
    CHECK_KIND(SentimentScore(std::numeric_limits<double>::infinity()), ErrorKind::ScoreOutOfRange);
}

TEST_CASE("record ids are zero padded to the dataset size") {
    CHECK(make_record_id("G1-S1", 3, 36) == "G1-S1#0003");
    CHECK(make_record_id("G1-S1", 9999, 10000) == "G1-S1#9999");
    CHECK(make_record_id("G1-S1", 7, 10001) == "G1-S1#00007");
    CHECK(make_record_id("x", 12, 200000) == "x#000012");
}

TEST_CASE("group labels") {
    CHECK(group_label(GroupTag{3}) == "Group-3");
    CHECK(group_label(GroupTag{std::string("HD2")}) == "HD2");
    CHECK(is_synthetic(GroupTag{1}));
    CHECK_FALSE(is_synthetic(GroupTag{std::string("HD1")}));
}

namespace {

SentenceRecord synthetic_record() {
    SentenceRecord r;
    r.record_id = "G1-S1#0000";
    r.dataset_id = "G1-S1";
    r.group = 1;
    r.text = "this man feels grim.";
    r.person = {"this man", GenderClass::Male, RaceClass::Unspecified};
    r.emotion = EmotionWord("grim", Polarity::Negative);
    return r;
}

} // namespace

TEST_CASE("record validation") {
    auto r = synthetic_record();
    CHECK_NOTHROW(validate_record(r));

    SUBCASE("synthetic records need an emotion word") {
        r.emotion.reset();
        CHECK_KIND(validate_record(r), ErrorKind::InvalidValue);
    }
    SUBCASE("synthetic records need a gender") {
        r.person.gender = GenderClass::Unspecified;
        CHECK_KIND(validate_record(r), ErrorKind::InvalidValue);
    }
    SUBCASE("text must begin with the enhancement") {
        r.enhancement = "Hey boy, ";
        CHECK_KIND(validate_record(r), ErrorKind::InvalidValue);
        r.prefix_lost = true;
        CHECK_NOTHROW(validate_record(r));
        r.prefix_lost = false;
        r.text = "Hey boy, this man feels grim.";
        CHECK_NOTHROW(validate_record(r));
    }
    SUBCASE("empty text") {
        r.text.clear();
        CHECK_KIND(validate_record(r), ErrorKind::InvalidValue);
    }
}

TEST_CASE("dataset validation") {
    Dataset ds;
    ds.dataset_id = "G1-S1";
    CHECK_KIND(validate_dataset(ds), ErrorKind::InvalidValue);
    ds.records.push_back(synthetic_record());
    CHECK_NOTHROW(validate_dataset(ds));
    ds.records.push_back(synthetic_record());
    CHECK_KIND(validate_dataset(ds), ErrorKind::InvalidValue);
    ds.records.back().record_id = "G1-S1#0001";
    ds.records.back().dataset_id = "G1-S2";
    CHECK_KIND(validate_dataset(ds), ErrorKind::InvalidValue);
}

TEST_CASE("default group specs are valid") {
    for (int g = 1; g <= 4; ++g) {
        CAPTURE(g);
        const auto spec = default_group_spec(g);
        CHECK_NOTHROW(validate_group_spec(spec));
        CHECK(spec.confounded == (g % 2 == 0));
        CHECK(spec.protected_attributes.contains(ProtectedAttribute::Race) == (g >= 3));
    }
    CHECK(default_group_spec(1).emotion_sets.size() == 5);
    CHECK(default_group_spec(2).emotion_sets.size() == 3);
    CHECK(default_group_spec(4).causal_model.confounders == std::set{CausalNode::Gender, CausalNode::Race});
    CHECK_KIND(default_group_spec(0), ErrorKind::InvalidGroup);
    CHECK_KIND(default_group_spec(5), ErrorKind::InvalidGroup);
}

TEST_CASE("group spec invariants") {
    SUBCASE("group 1 protects gender only") {
        auto spec = default_group_spec(1);
        spec.protected_attributes.insert(ProtectedAttribute::Race);
        CHECK_KIND(validate_group_spec(spec), ErrorKind::InvalidGroup);
    }
    SUBCASE("group 2 must be confounded") {
        auto spec = default_group_spec(2);
        spec.confounded = false;
        CHECK_KIND(validate_group_spec(spec), ErrorKind::InvalidGroup);
    }
    SUBCASE("skew in [0.5, 1]") {
        CHECK_KIND(validate_group_spec(default_group_spec(2, 0.4)), ErrorKind::InvalidGroup);
        CHECK_KIND(validate_group_spec(default_group_spec(4, 1.1)), ErrorKind::InvalidGroup);
        CHECK_NOTHROW(validate_group_spec(default_group_spec(2, 0.5)));
        CHECK_NOTHROW(validate_group_spec(default_group_spec(2, 1.0)));
    }
    SUBCASE("confounded sets hold both polarities") {
        auto spec = default_group_spec(2);
        spec.emotion_sets.push_back({EmotionWord("grim", Polarity::Negative)});
        CHECK_KIND(validate_group_spec(spec), ErrorKind::InvalidGroup);
    }
    SUBCASE("a word keeps one polarity") {
        auto spec = default_group_spec(1);
        spec.emotion_sets.push_back({EmotionWord("grim", Polarity::Positive)});
        CHECK_KIND(validate_group_spec(spec), ErrorKind::InvalidGroup);
    }
    SUBCASE("sentiment has no outgoing edges") {
        auto spec = default_group_spec(1);
        spec.causal_model.edges.push_back({CausalNode::Sentiment, CausalNode::Gender, LinkStatus::Hypothesized});
        CHECK_KIND(validate_group_spec(spec), ErrorKind::InvalidGroup);
    }
    SUBCASE("confounders are protected attributes") {
        auto spec = default_group_spec(2);
        spec.causal_model.confounders.insert(CausalNode::EmotionWord);
        CHECK_KIND(validate_group_spec(spec), ErrorKind::InvalidGroup);
    }
    SUBCASE("no empty sets") {
        auto spec = default_group_spec(3);
        spec.emotion_sets.push_back({});
        CHECK_KIND(validate_group_spec(spec), ErrorKind::InvalidGroup);
    }
}
