#include "golden_rows.hpp"
#include "helpers.hpp"

#include "sasrate/rating.hpp"

using namespace sasrate;

namespace {

std::vector<RatedSystem> systems(std::initializer_list<std::pair<const char*, double>> raw) {
    std::vector<RatedSystem> out;
    for (const auto& [id, v] : raw) out.push_back({id, RawScore::wrs(v)});
    return out;
}

std::map<std::string, int> ratings(const std::vector<RatedSystem>& raw, int levels = 3) {
    return complete_order(partial_order(raw), levels).ratings;
}

} // namespace

TEST_CASE("published rows") {
    for (const auto& row : golden::rows()) {
        CAPTURE(row.name);
        std::vector<RatedSystem> raw;
        for (const auto& [id, v] : row.raw)
            raw.push_back({id, v == golden::kUndef ? RawScore::undefined() : RawScore::die(v)});
        CHECK(complete_order(partial_order(raw), 3).ratings == row.ratings);
    }
}

TEST_CASE("partial order sorts ascending with Undefined last") {
    std::vector<RatedSystem> raw{{"a", RawScore::undefined()}, {"b", RawScore::die(5)}, {"c", RawScore::die(1)},
                                 {"d", RawScore::die(5)}};
    const auto po = partial_order(raw);
    std::vector<std::string> ids;
    for (const auto& e : po.entries) ids.push_back(e.sas_id);
    CHECK(ids == std::vector<std::string>{"c", "b", "d", "a"});

    std::vector<RatedSystem> mixed{{"a", RawScore::wrs(1)}, {"b", RawScore::die(1)}};
    CHECK_KIND(partial_order(mixed), ErrorKind::MixedMetric);
}

TEST_CASE("complete order partitions distinct values") {
    CHECK(ratings(systems({{"a", 0}, {"b", 0}, {"c", 0}})) == std::map<std::string, int>{{"a", 1}, {"b", 1}, {"c", 1}});
    CHECK(ratings(systems({{"a", 0}, {"b", 1}})) == std::map<std::string, int>{{"a", 1}, {"b", 3}});
    CHECK(ratings(systems({{"a", 0}, {"b", 1}, {"c", 2}})) == std::map<std::string, int>{{"a", 1}, {"b", 2}, {"c", 3}});
    // Four distinct values over three levels: the first block takes two.
    CHECK(ratings(systems({{"a", 0}, {"b", 1}, {"c", 2}, {"d", 3}})) ==
          std::map<std::string, int>{{"a", 1}, {"b", 1}, {"c", 2}, {"d", 3}});
    CHECK(ratings(systems({{"a", 0}, {"b", 1}}), 5) == std::map<std::string, int>{{"a", 1}, {"b", 5}});
    CHECK(ratings(systems({{"a", 0}, {"b", 1}, {"c", 2}}), 5) ==
          std::map<std::string, int>{{"a", 1}, {"b", 3}, {"c", 5}});
    CHECK(ratings(systems({{"only", 7}})) == std::map<std::string, int>{{"only", 1}});
}

TEST_CASE("Undefined always rates L") {
    std::vector<RatedSystem> raw{{"a", RawScore::die(0)}, {"b", RawScore::undefined()}};
    CHECK(complete_order(partial_order(raw), 3).ratings == std::map<std::string, int>{{"a", 1}, {"b", 3}});
    CHECK(complete_order(partial_order(raw), 7).ratings.at("b") == 7);
    std::vector<RatedSystem> lone{{"b", RawScore::undefined()}};
    CHECK(complete_order(partial_order(lone), 3).ratings.at("b") == 3);
}

TEST_CASE("levels below two are rejected") {
    CHECK_KIND(complete_order(partial_order(systems({{"a", 1}})), 1), ErrorKind::InvalidLevels);
    CHECK_KIND(complete_order(partial_order(systems({{"a", 1}})), 0), ErrorKind::InvalidLevels);
}

TEST_CASE("raw scores") {
    CHECK_KIND(RawScore::wrs(-1), ErrorKind::InvalidValue);
    CHECK_KIND(RawScore::die(std::numeric_limits<double>::infinity()), ErrorKind::InvalidValue);
    CHECK(RawScore::die(1) < RawScore::undefined());
    CHECK_FALSE(RawScore::undefined() < RawScore::die(1e300));
    CHECK(RawScore::undefined() == RawScore::undefined());
    CHECK_FALSE(RawScore::wrs(1) == RawScore::die(1));
}

TEST_CASE("overall rating is the worst fine-grained rating") {
    const std::vector<int> fine{1, 3, 2};
    CHECK(overall_rating(fine) == 3);
    CHECK_KIND(overall_rating(std::span<const int>{}), ErrorKind::InvalidValue);
}
