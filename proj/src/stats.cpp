#include "sasrate/stats.hpp"

#include "sasrate/error.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <limits>

namespace sasrate {

namespace {

void require_sample_sizes(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2)
        throw Error(ErrorKind::SampleTooSmall, "t-test needs at least 2 values per sample (got " +
                                                   std::to_string(a.size()) + " and " + std::to_string(b.size()) + ")");
}

double mean_of(std::span<const double> v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

double variance_of(std::span<const double> v, double mean) {
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(v.size() - 1);
}

} // namespace

double t_value(std::span<const double> a, std::span<const double> b) {
    require_sample_sizes(a, b);
    const double mean_a = mean_of(a);
    const double mean_b = mean_of(b);
    const double var_a = variance_of(a, mean_a);
    const double var_b = variance_of(b, mean_b);
    const double gap = mean_a - mean_b;
    const double se2 = var_a / static_cast<double>(a.size()) + var_b / static_cast<double>(b.size());
    if (se2 == 0.0) {
        if (gap == 0.0) return 0.0;
        return gap > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    }
    return gap / std::sqrt(se2);
}

int degrees_of_freedom(std::span<const double> a, std::span<const double> b) {
    require_sample_sizes(a, b);
    return static_cast<int>(std::min(a.size(), b.size())) - 1;
}

double t_critical(double ci, int dof) {
    bool supported = false;
    for (double level : kConfidenceLevels) supported = supported || std::abs(ci - level) < 1e-12;
    if (!supported) throw Error(ErrorKind::UnsupportedCI, "confidence level " + std::to_string(ci) + " is not one of 0.95, 0.70, 0.60");
    if (dof < 1) throw Error(ErrorKind::SampleTooSmall, "degrees of freedom must be >= 1");
    const boost::math::students_t_distribution<double> dist(static_cast<double>(dof));
    return boost::math::quantile(dist, 1.0 - (1.0 - ci) / 2.0);
}

Rejections rejections_for(double t, int dof) {
    Rejections r;
    for (auto c : kConfidences) r[c] = std::abs(t) > t_critical(level_of(c), dof);
    return r;
}

TTestResult t_test(std::span<const double> a, std::span<const double> b) {
    TTestResult result;
    result.t = t_value(a, b);
    result.dof = degrees_of_freedom(a, b);
    result.rejections = rejections_for(result.t, result.dof);
    return result;
}

WrsScore weighted_rejection_score(std::span<const Rejections> rejections) {
    WrsScore score;
    for (const auto& r : rejections) {
        for (std::size_t i = 0; i < 3; ++i) score.counts[i] += r.at[i] ? 1 : 0;
    }
    int tenths = 0;
    for (std::size_t i = 0; i < 3; ++i) tenths += kRejectionWeightTenths[i] * score.counts[i];
    score.value = static_cast<double>(tenths) / 10.0;
    return score;
}

WrsScore weighted_rejection_score(std::span<const TTestResult> tests) {
    std::vector<Rejections> r;
    r.reserve(tests.size());
    for (const auto& t : tests) r.push_back(t.rejections);
    return weighted_rejection_score(r);
}

std::string_view to_string(StatAttribute a) {
    switch (a) {
        case StatAttribute::Gender: return "Gender";
        case StatAttribute::Race: return "Race";
        case StatAttribute::RaceGender: return "RaceGender";
    }
    return "?";
}

std::string attribute_class(const SentenceRecord& record, StatAttribute attribute) {
    const auto& p = record.person;
    switch (attribute) {
        case StatAttribute::Gender:
            return p.gender == GenderClass::Unspecified ? "" : std::string(to_string(p.gender));
        case StatAttribute::Race:
            return p.race == RaceClass::Unspecified ? "" : std::string(to_string(p.race));
        case StatAttribute::RaceGender:
            if (p.gender == GenderClass::Unspecified || p.race == RaceClass::Unspecified) return "";
            return std::string(to_string(p.race)) + "|" + std::string(to_string(p.gender));
    }
    return "";
}

ScoreIndex index_scores(std::span<const ScoredRecord> scores) {
    ScoreIndex index;
    index.reserve(scores.size());
    for (const auto& s : scores) {
        if (!index.emplace(s.record_id, s.score.value()).second)
            throw Error(ErrorKind::InvalidValue, "record '" + s.record_id + "' scored twice by '" + s.sas_id + "'");
    }
    return index;
}

StatisticalBias group_statistical_bias(std::span<const Dataset> datasets, const ScoreIndex& scores,
                                       StatAttribute attribute) {
    StatisticalBias result;
    std::vector<Rejections> per_dataset;
    for (const auto& ds : datasets) {
        std::map<std::string, std::vector<double>> by_class;
        for (const auto& r : ds.records) {
            const auto cls = attribute_class(r, attribute);
            if (cls.empty()) continue;
            auto it = scores.find(r.record_id);
            if (it == scores.end()) throw Error(ErrorKind::InvalidValue, "no score for record '" + r.record_id + "'");
            by_class[cls].push_back(it->second);
        }
        if (by_class.size() < 2)
            throw Error(ErrorKind::DegenerateClass, "dataset '" + ds.dataset_id + "' has fewer than two " +
                                                        std::string(to_string(attribute)) + " classes");
        for (const auto& [cls, values] : by_class) {
            if (values.size() < 2)
                throw Error(ErrorKind::DegenerateClass,
                            "dataset '" + ds.dataset_id + "' class '" + cls + "' has fewer than 2 scores");
        }

        DatasetTest dt;
        dt.dataset_id = ds.dataset_id;
        for (auto a = by_class.begin(); a != by_class.end(); ++a) {
            for (auto b = std::next(a); b != by_class.end(); ++b) {
                PairTest pair{a->first, b->first, a->second.size(), b->second.size(), t_test(a->second, b->second)};
                for (auto c : kConfidences) dt.combined[c] = dt.combined[c] || pair.test.rejections[c];
                dt.pairs.push_back(std::move(pair));
            }
        }
        per_dataset.push_back(dt.combined);
        result.datasets.push_back(std::move(dt));
    }
    result.wrs = weighted_rejection_score(per_dataset);
    return result;
}

} // namespace sasrate
