#include "sasrate/rating.hpp"

#include "sasrate/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace sasrate {

RawScore RawScore::wrs(double value) {
    if (!std::isfinite(value) || value < 0) throw Error(ErrorKind::InvalidValue, "WRS must be finite and >= 0");
    return {Kind::Wrs, value};
}

RawScore RawScore::die(double value) {
    if (!std::isfinite(value) || value < 0) throw Error(ErrorKind::InvalidValue, "DIE% must be finite and >= 0");
    return {Kind::Die, value};
}

RawScore RawScore::undefined() { return {Kind::Undefined, 0.0}; }

bool operator<(const RawScore& a, const RawScore& b) {
    if (a.is_undefined()) return false;
    if (b.is_undefined()) return true;
    return a.value_ < b.value_;
}

bool operator==(const RawScore& a, const RawScore& b) {
    if (a.is_undefined() || b.is_undefined()) return a.is_undefined() == b.is_undefined();
    return a.kind_ == b.kind_ && a.value_ == b.value_;
}

std::string_view to_string(RawScore::Kind kind) {
    switch (kind) {
        case RawScore::Kind::Wrs: return "WRS";
        case RawScore::Kind::Die: return "DIE";
        case RawScore::Kind::Undefined: return "Undefined";
    }
    return "?";
}

PartialOrder partial_order(std::span<const RatedSystem> raw) {
    bool has_wrs = false;
    bool has_die = false;
    for (const auto& e : raw) {
        has_wrs = has_wrs || e.raw.kind() == RawScore::Kind::Wrs;
        has_die = has_die || e.raw.kind() == RawScore::Kind::Die;
    }
    if (has_wrs && has_die) throw Error(ErrorKind::MixedMetric, "partial order mixes WRS and DIE raw scores");

    PartialOrder po{{raw.begin(), raw.end()}};
    std::stable_sort(po.entries.begin(), po.entries.end(),
                     [](const RatedSystem& a, const RatedSystem& b) { return a.raw < b.raw; });
    return po;
}

CompleteOrder complete_order(const PartialOrder& po, int levels) {
    if (levels < 2) throw Error(ErrorKind::InvalidLevels, "rating levels must be >= 2 (got " + std::to_string(levels) + ")");

    std::set<double> finite;
    bool any_undefined = false;
    for (const auto& e : po.entries) {
        if (e.raw.is_undefined()) any_undefined = true;
        else finite.insert(e.raw.value());
    }
    // Distinct values in ascending order; Undefined occupies one extra top slot.
    std::vector<double> distinct(finite.begin(), finite.end());
    const std::size_t n = distinct.size() + (any_undefined ? 1 : 0);
    const auto L = static_cast<std::size_t>(levels);

    std::vector<int> rating_of_rank(n, 1);
    if (n > L) {
        const std::size_t base = n / L;
        const std::size_t extra = n % L;
        std::size_t rank = 0;
        for (std::size_t block = 0; block < L; ++block) {
            const std::size_t size = base + (block < extra ? 1 : 0);
            for (std::size_t k = 0; k < size; ++k) rating_of_rank[rank++] = static_cast<int>(block + 1);
        }
    } else if (n >= 2) {
        for (std::size_t r = 0; r < n; ++r) {
            const double spread = static_cast<double>(r) * static_cast<double>(L - 1) / static_cast<double>(n - 1);
            rating_of_rank[r] = 1 + static_cast<int>(std::lround(spread));
        }
    }

    CompleteOrder out;
    out.levels = levels;
    for (const auto& e : po.entries) {
        if (e.raw.is_undefined()) {
            out.ratings[e.sas_id] = levels;
            continue;
        }
        const auto rank = static_cast<std::size_t>(
            std::lower_bound(distinct.begin(), distinct.end(), e.raw.value()) - distinct.begin());
        out.ratings[e.sas_id] = rating_of_rank[rank];
    }
    return out;
}

int overall_rating(std::span<const int> fine) {
    if (fine.empty()) throw Error(ErrorKind::InvalidValue, "overall rating needs at least one fine-grained rating");
    return *std::max_element(fine.begin(), fine.end());
}

} // namespace sasrate
