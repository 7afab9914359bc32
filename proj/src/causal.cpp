#include "sasrate/causal.hpp"

#include "sasrate/error.hpp"

#include <algorithm>
#include <cmath>

namespace sasrate {

void ConditionalTable::add(Polarity x, const std::string& z, double y) {
    auto& cell = cells_[{x, z}];
    ++cell.count;
    cell.sum_scores += y;
    ++marginal_z_[z];
    ++total_;
}

void ConditionalTable::merge(const ConditionalTable& other) {
    for (const auto& [key, cell] : other.cells_) {
        auto& mine = cells_[key];
        mine.count += cell.count;
        mine.sum_scores += cell.sum_scores;
    }
    for (const auto& [z, n] : other.marginal_z_) marginal_z_[z] += n;
    total_ += other.total_;
}

long ConditionalTable::count(Polarity x, const std::string& z) const {
    auto it = cells_.find({x, z});
    return it == cells_.end() ? 0 : it->second.count;
}

bool ConditionalTable::has_polarity(Polarity x) const {
    return std::any_of(cells_.begin(), cells_.end(),
                       [x](const auto& kv) { return kv.first.first == x && kv.second.count > 0; });
}

Json ConditionalTable::to_json() const {
    Json cells = Json::array();
    for (const auto& [key, cell] : cells_) {
        cells.push_back({{"x", to_string(key.first)}, {"z", key.second}, {"count", cell.count},
                         {"sum_scores", cell.sum_scores}});
    }
    return Json{{"cells", cells}, {"marginal_z", marginal_z_}};
}

std::string confounder_class(const SentenceRecord& record, const std::set<CausalNode>& confounders) {
    std::string label;
    // Race before gender, matching the combined class labels used elsewhere.
    if (confounders.contains(CausalNode::Race)) {
        if (record.person.race == RaceClass::Unspecified) return "";
        label += to_string(record.person.race);
    }
    if (confounders.contains(CausalNode::Gender)) {
        if (record.person.gender == GenderClass::Unspecified) return "";
        if (!label.empty()) label += "|";
        label += to_string(record.person.gender);
    }
    return confounders.empty() ? "*" : label;
}

ConditionalTable build_table(std::span<const SentenceRecord> records, const ScoreIndex& scores,
                             const std::set<CausalNode>& confounders) {
    ConditionalTable table;
    for (const auto& r : records) {
        if (!r.emotion) continue;
        const auto z = confounder_class(r, confounders);
        if (z.empty()) continue;
        auto it = scores.find(r.record_id);
        if (it == scores.end()) throw Error(ErrorKind::InvalidValue, "no score for record '" + r.record_id + "'");
        table.add(r.emotion->polarity, z, it->second);
    }
    return table;
}

double expectation_given(const ConditionalTable& table, Polarity x) {
    long count = 0;
    double sum = 0.0;
    for (const auto& [key, cell] : table.cells()) {
        if (key.first != x) continue;
        count += cell.count;
        sum += cell.sum_scores;
    }
    if (count == 0)
        throw Error(ErrorKind::EmptyCondition, "no observations with emotion polarity " + std::string(to_string(x)));
    return sum / static_cast<double>(count);
}

double backdoor_expectation(const ConditionalTable& table, Polarity x) {
    if (!table.has_polarity(x))
        throw Error(ErrorKind::EmptyCondition, "no observations with emotion polarity " + std::string(to_string(x)));
    double value = 0.0;
    for (const auto& [z, n_z] : table.marginal_z()) {
        if (n_z == 0) continue;
        auto it = table.cells().find({x, z});
        if (it == table.cells().end() || it->second.count == 0)
            throw Error(ErrorKind::PositivityViolation,
                        "no observations for (" + std::string(to_string(x)) + ", " + z + ")");
        const double conditional = it->second.sum_scores / static_cast<double>(it->second.count);
        value += conditional * (static_cast<double>(n_z) / static_cast<double>(table.total()));
    }
    return value;
}

DieValue die_percent(const ConditionalTable& table, Polarity x, double zero_tol) {
    const double observed = expectation_given(table, x);
    const double adjusted = backdoor_expectation(table, x);
    if (std::abs(observed) <= zero_tol) return std::nullopt;
    return std::abs(adjusted - observed) / std::abs(observed) * 100.0;
}

DieResult die_result(const ConditionalTable& table, double zero_tol) {
    DieResult result;
    bool undefined = false;
    double worst = 0.0;
    for (auto x : kPolarities) {
        if (!table.has_polarity(x)) continue;
        const auto v = die_percent(table, x, zero_tol);
        result.per_polarity[x] = v;
        if (!v) undefined = true;
        else worst = std::max(worst, *v);
    }
    if (result.per_polarity.empty()) throw Error(ErrorKind::EmptyCondition, "table has no observations");
    if (!undefined) result.group_max = worst;
    return result;
}

GroupDie group_die(std::span<const Dataset> datasets, const ScoreIndex& scores,
                   const std::set<CausalNode>& confounders, double zero_tol) {
    if (datasets.empty()) throw Error(ErrorKind::EmptyCondition, "no datasets to deconfound");
    GroupDie out;
    bool undefined = false;
    double worst = 0.0;
    for (const auto& ds : datasets) {
        DatasetDie d;
        d.dataset_id = ds.dataset_id;
        d.table = build_table(ds.records, scores, confounders);
        try {
            d.die = die_result(d.table, zero_tol);
        } catch (const Error& e) {
            throw Error(e.kind(), "dataset '" + ds.dataset_id + "': " + e.detail());
        }
        if (!d.die.group_max) undefined = true;
        else worst = std::max(worst, *d.die.group_max);
        out.datasets.push_back(std::move(d));
    }
    out.raw = undefined ? RawScore::undefined() : RawScore::die(worst);
    return out;
}

std::map<Polarity, bool> confounding_verdict(const ConditionalTable& table, double eps) {
    std::map<Polarity, bool> verdict;
    for (auto x : kPolarities) {
        if (!table.has_polarity(x)) continue;
        verdict[x] = std::abs(expectation_given(table, x) - backdoor_expectation(table, x)) > eps;
    }
    return verdict;
}

} // namespace sasrate
