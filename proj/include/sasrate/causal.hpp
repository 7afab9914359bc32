#pragma once

// Observational and backdoor-adjusted expectations of sentiment given the
// emotion word's polarity, the Deconfounding Impact Estimate (DIE%) and the
// confounding verdict.
//
// Scores enter as sufficient statistics per (polarity, confounder class)
// cell. Summing E[Y | X, Z=z] P(z) over confounder classes equals the
// expectation of the adjusted distribution sum_z P(Y | X, Z=z) P(z).

#include "sasrate/core.hpp"
#include "sasrate/io.hpp"
#include "sasrate/rating.hpp"
#include "sasrate/stats.hpp"

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sasrate {

struct Cell {
    long count = 0;
    double sum_scores = 0.0;
};

class ConditionalTable {
public:
    void add(Polarity x, const std::string& z, double y);
    // Cell-wise sum; tables built from disjoint record sets merge exactly.
    void merge(const ConditionalTable& other);

    const std::map<std::pair<Polarity, std::string>, Cell>& cells() const noexcept { return cells_; }
    const std::map<std::string, long>& marginal_z() const noexcept { return marginal_z_; }
    long count(Polarity x, const std::string& z) const;
    long total() const noexcept { return total_; }
    bool has_polarity(Polarity x) const;

    Json to_json() const;

private:
    std::map<std::pair<Polarity, std::string>, Cell> cells_;
    std::map<std::string, long> marginal_z_;
    long total_ = 0;
};

// Confounder class label of a record, e.g. "Female" or "AfricanAmerican|Female".
std::string confounder_class(const SentenceRecord& record, const std::set<CausalNode>& confounders);

// Records without an emotion word or with an unspecified confounder class are
// skipped.
ConditionalTable build_table(std::span<const SentenceRecord> records, const ScoreIndex& scores,
                             const std::set<CausalNode>& confounders);

// E[Y | X = x]. Throws EmptyCondition when no record has polarity x.
double expectation_given(const ConditionalTable& table, Polarity x);

// E[Y | do(X = x)] = sum_z E[Y | X = x, Z = z] P(z). Throws
// PositivityViolation naming the first empty (x, z) cell.
double backdoor_expectation(const ConditionalTable& table, Polarity x);

// |E[Y|do(X=x)] - E[Y|X=x]| / |E[Y|X=x]| * 100, or nullopt (Undefined) when
// |E[Y|X=x]| <= zero_tol.
using DieValue = std::optional<double>;

inline constexpr double kDefaultZeroTol = 1e-9;
inline constexpr double kDefaultEps = 1e-6;

DieValue die_percent(const ConditionalTable& table, Polarity x, double zero_tol = kDefaultZeroTol);

struct DieResult {
    // Only polarities present in the data appear.
    std::map<Polarity, DieValue> per_polarity;
    // nullopt when any component is Undefined.
    DieValue group_max;
};

DieResult die_result(const ConditionalTable& table, double zero_tol = kDefaultZeroTol);

struct DatasetDie {
    std::string dataset_id;
    ConditionalTable table;
    DieResult die;
};

struct GroupDie {
    RawScore raw = RawScore::undefined();
    std::vector<DatasetDie> datasets;
};

// MAX over polarities within each dataset, then MAX over datasets; any
// Undefined makes the group Undefined.
GroupDie group_die(std::span<const Dataset> datasets, const ScoreIndex& scores,
                   const std::set<CausalNode>& confounders, double zero_tol = kDefaultZeroTol);

// True per polarity iff |E[Y|X=x] - E[Y|do(X=x)]| > eps.
std::map<Polarity, bool> confounding_verdict(const ConditionalTable& table, double eps = kDefaultEps);

} // namespace sasrate
