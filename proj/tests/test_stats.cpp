#include "helpers.hpp"
#include "oracles.hpp"

#include "sasrate/stats.hpp"

#include <cmath>
#include <limits>

using namespace sasrate;

TEST_CASE("t statistic on a worked example") {
    const std::vector<double> a{1, 2, 3, 4};
    const std::vector<double> b{2, 3, 4, 5};
    // means 2.5 and 3.5, both variances 5/3: t = -1 / sqrt(5/6)
    CHECK(t_value(a, b) == doctest::Approx(-1.0 / std::sqrt(5.0 / 6.0)).epsilon(1e-15));
    CHECK(t_value(a, b) == doctest::Approx(-1.0954451150103324));
    CHECK(t_value(b, a) == -t_value(a, b));
    CHECK(degrees_of_freedom(a, b) == 3);
    const std::vector<double> c{1, 2, 3, 4, 5, 6, 7};
    CHECK(degrees_of_freedom(a, c) == 3);
    CHECK(degrees_of_freedom(c, c) == 6);
}

TEST_CASE("zero-variance samples") {
    const std::vector<double> ones(5, 1.0);
    const std::vector<double> minus(5, -1.0);
    CHECK(t_value(ones, ones) == 0.0);
    CHECK(t_value(ones, minus) == std::numeric_limits<double>::infinity());
    CHECK(t_value(minus, ones) == -std::numeric_limits<double>::infinity());
    const auto r = t_test(minus, ones);
    CHECK(r.rejections.at == std::array{true, true, true});
    CHECK_FALSE(t_test(ones, ones).rejections.any());
}

TEST_CASE("samples need two values") {
    const std::vector<double> one{1.0};
    const std::vector<double> two{1.0, 2.0};
    CHECK_KIND(t_value(one, two), ErrorKind::SampleTooSmall);
    CHECK_KIND(t_test(two, one), ErrorKind::SampleTooSmall);
}

TEST_CASE("critical values") {
    CHECK(t_critical(0.95, 10) == doctest::Approx(2.2281).epsilon(1e-4));
    CHECK(t_critical(0.95, 1) == doctest::Approx(12.7062).epsilon(1e-4));
    for (int dof : {1, 2, 3, 5, 9, 17, 30, 100}) {
        for (double ci : kConfidenceLevels) {
            CAPTURE(dof);
            CAPTURE(ci);
            CHECK(std::abs(t_critical(ci, dof) - oracle::t_critical(ci, dof)) < 1e-6);
        }
    }
    CHECK(t_critical(0.95, 5) > t_critical(0.70, 5));
    CHECK(t_critical(0.70, 5) > t_critical(0.60, 5));
    CHECK_KIND(t_critical(0.90, 5), ErrorKind::UnsupportedCI);
    CHECK_KIND(t_critical(0.95, 0), ErrorKind::SampleTooSmall);
}

TEST_CASE("rejections compare |t| with each critical value") {
    const int dof = 10;
    const double mid = (t_critical(0.70, dof) + t_critical(0.95, dof)) / 2;
    CHECK(rejections_for(mid, dof).at == std::array{false, true, true});
    CHECK(rejections_for(-mid, dof).at == std::array{false, true, true});
    CHECK(rejections_for(t_critical(0.60, dof), dof).at == std::array{false, false, false});
    CHECK(rejections_for(0.0, dof).at == std::array{false, false, false});
}

TEST_CASE("weighted rejection score") {
    const std::vector<Rejections> all(5, Rejections{{true, true, true}});
    const auto wrs = weighted_rejection_score(all);
    CHECK(wrs.value == 12.0);
    CHECK(wrs.counts == std::array{5, 5, 5});
    CHECK(weighted_rejection_score(std::span(all).first(1)).value == 2.4);

    const std::vector<Rejections> mixed{{{false, true, true}}, {{false, false, true}}, {{false, false, false}}};
    const auto m = weighted_rejection_score(mixed);
    CHECK(m.value == doctest::Approx(2.0));
    CHECK(m.counts == std::array{0, 1, 2});
    CHECK(weighted_rejection_score(std::span<const Rejections>{}).value == 0.0);
}

namespace {

Dataset labelled(const std::string& id, const std::vector<std::pair<PersonTerm, double>>& rows, ScoreIndex& scores) {
    Dataset ds;
    ds.dataset_id = id;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        SentenceRecord r;
        r.record_id = make_record_id(id, i, rows.size());
        r.dataset_id = id;
        r.text = "t";
        r.person = rows[i].first;
        r.emotion = EmotionWord("grim", Polarity::Negative);
        ds.records.push_back(r);
        scores[r.record_id] = rows[i].second;
    }
    return ds;
}

const PersonTerm kEaM{"a", GenderClass::Male, RaceClass::EuropeanAmerican};
const PersonTerm kEaF{"b", GenderClass::Female, RaceClass::EuropeanAmerican};
const PersonTerm kAaM{"c", GenderClass::Male, RaceClass::AfricanAmerican};
const PersonTerm kAaF{"d", GenderClass::Female, RaceClass::AfricanAmerican};

} // namespace

TEST_CASE("group statistical bias") {
    ScoreIndex scores;
    std::vector<std::pair<PersonTerm, double>> rows;
    for (int i = 0; i < 10; ++i) {
        rows.push_back({kEaM, -1});
        rows.push_back({kEaF, 1});
        rows.push_back({kAaM, -1});
        rows.push_back({kAaF, 1});
    }
    const std::vector<Dataset> datasets{labelled("D1", rows, scores), labelled("D2", rows, scores)};

    const auto gender = group_statistical_bias(datasets, scores, StatAttribute::Gender);
    CHECK(gender.wrs.value == 4.8);
    REQUIRE(gender.datasets.size() == 2);
    CHECK(gender.datasets[0].pairs.size() == 1);
    CHECK(gender.datasets[0].pairs[0].n_a == 20);
    CHECK(gender.datasets[0].pairs[0].test.dof == 19);

    CHECK(group_statistical_bias(datasets, scores, StatAttribute::Race).wrs.value == 0.0);

    // Four race|gender classes: six pairs, some reject, so each level counts
    // once per dataset.
    const auto rg = group_statistical_bias(datasets, scores, StatAttribute::RaceGender);
    CHECK(rg.datasets[0].pairs.size() == 6);
    CHECK(rg.wrs.value == 4.8);
    CHECK(rg.wrs.counts == std::array{2, 2, 2});
}

TEST_CASE("degenerate inputs") {
    ScoreIndex scores;
    const auto one_class = labelled("D", {{kEaM, 0.1}, {kEaM, 0.2}}, scores);
    CHECK_KIND(group_statistical_bias(std::span(&one_class, 1), scores, StatAttribute::Gender),
               ErrorKind::DegenerateClass);
    const auto thin = labelled("E", {{kEaM, 0.1}, {kEaM, 0.2}, {kEaF, 0.3}}, scores);
    CHECK_KIND(group_statistical_bias(std::span(&thin, 1), scores, StatAttribute::Gender), ErrorKind::DegenerateClass);
    const auto ok = labelled("F", {{kEaM, 0.1}, {kEaM, 0.2}, {kEaF, 0.3}, {kEaF, 0.1}}, scores);
    ScoreIndex partial = scores;
    partial.erase("F#0003");
    CHECK_KIND(group_statistical_bias(std::span(&ok, 1), partial, StatAttribute::Gender), ErrorKind::InvalidValue);
}

TEST_CASE("score index rejects duplicates") {
    const std::vector<ScoredRecord> dup{{"a", "s", SentimentScore(0)}, {"a", "s", SentimentScore(1)}};
    CHECK_KIND(index_scores(dup), ErrorKind::InvalidValue);
}
