#pragma once

// Unpooled two-sample t statistics, rejection at three fixed confidence
// levels, and the Weighted Rejection Score (WRS).

#include "sasrate/core.hpp"

#include <array>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace sasrate {

enum class Confidence { CI95, CI70, CI60 };

inline constexpr std::array<Confidence, 3> kConfidences{Confidence::CI95, Confidence::CI70, Confidence::CI60};
inline constexpr std::array<double, 3> kConfidenceLevels{0.95, 0.70, 0.60};
// Weights in tenths so sums of weights stay exact decimals: 1.0, 0.8, 0.6.
inline constexpr std::array<int, 3> kRejectionWeightTenths{10, 8, 6};

constexpr double level_of(Confidence c) { return kConfidenceLevels[static_cast<std::size_t>(c)]; }

struct Rejections {
    std::array<bool, 3> at{};

    bool operator[](Confidence c) const { return at[static_cast<std::size_t>(c)]; }
    bool& operator[](Confidence c) { return at[static_cast<std::size_t>(c)]; }
    bool any() const { return at[0] || at[1] || at[2]; }

    friend bool operator==(const Rejections&, const Rejections&) = default;
};

struct TTestResult {
    double t = 0.0;
    int dof = 1;
    Rejections rejections;
};

struct WrsScore {
    double value = 0.0;
    // Rejection counts x_i per confidence level.
    std::array<int, 3> counts{};
};

// (mean(a) - mean(b)) / sqrt(s_a^2/n_a + s_b^2/n_b) with unbiased variances.
// Two zero-variance samples give 0 when their means agree and +-infinity
// otherwise. Throws SampleTooSmall when either sample has fewer than 2 values.
double t_value(std::span<const double> a, std::span<const double> b);

// min(n_a, n_b) - 1.
int degrees_of_freedom(std::span<const double> a, std::span<const double> b);

// Two-tailed critical value for ci in {0.95, 0.70, 0.60}.
double t_critical(double ci, int dof);

// |t| > t_critical at every level; infinite t rejects everywhere.
Rejections rejections_for(double t, int dof);

TTestResult t_test(std::span<const double> a, std::span<const double> b);

WrsScore weighted_rejection_score(std::span<const Rejections> rejections);
WrsScore weighted_rejection_score(std::span<const TTestResult> tests);

enum class StatAttribute { Gender, Race, RaceGender };

std::string_view to_string(StatAttribute a);

// Class label of a record under an attribute; empty when unspecified.
std::string attribute_class(const SentenceRecord& record, StatAttribute attribute);

using ScoreIndex = std::unordered_map<std::string, double>;

ScoreIndex index_scores(std::span<const ScoredRecord> scores);

struct PairTest {
    std::string class_a;
    std::string class_b;
    std::size_t n_a = 0;
    std::size_t n_b = 0;
    TTestResult test;
};

struct DatasetTest {
    std::string dataset_id;
    std::vector<PairTest> pairs;
    // A level counts once per dataset if any class pair rejects there.
    Rejections combined;
};

struct StatisticalBias {
    WrsScore wrs;
    std::vector<DatasetTest> datasets;
};

// One t-test per unordered pair of attribute classes in each dataset.
// Throws DegenerateClass when a class has fewer than two scores or fewer
// than two classes are present.
StatisticalBias group_statistical_bias(std::span<const Dataset> datasets, const ScoreIndex& scores,
                                       StatAttribute attribute);

} // namespace sasrate
