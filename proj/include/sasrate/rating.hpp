#pragma once

// Raw scores to partial orders, partial orders to L-level ratings.

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sasrate {

class RawScore {
public:
    enum class Kind { Wrs, Die, Undefined };

    static RawScore wrs(double value);
    static RawScore die(double value);
    static RawScore undefined();

    Kind kind() const noexcept { return kind_; }
    bool is_undefined() const noexcept { return kind_ == Kind::Undefined; }
    // Only meaningful for defined scores.
    double value() const noexcept { return value_; }

    // Undefined sorts strictly above every finite value.
    friend bool operator<(const RawScore& a, const RawScore& b);
    friend bool operator==(const RawScore& a, const RawScore& b);

private:
    RawScore(Kind kind, double value) : kind_(kind), value_(value) {}
    Kind kind_;
    double value_;
};

std::string_view to_string(RawScore::Kind kind);

struct RatedSystem {
    std::string sas_id;
    RawScore raw;
};

struct PartialOrder {
    std::vector<RatedSystem> entries;
};

struct CompleteOrder {
    std::map<std::string, int> ratings;
    int levels = 3;
};

// Stable ascending sort; Undefined last. Throws MixedMetric when WRS and DIE
// values are mixed.
PartialOrder partial_order(std::span<const RatedSystem> raw);

// Splits the distinct raw values into `levels` contiguous blocks. With more
// distinct values than levels the first (n mod L) blocks take one extra value;
// with n <= L the ranks are spread evenly over 1..L. An Undefined score takes
// the top distinct slot and always rates L.
CompleteOrder complete_order(const PartialOrder& po, int levels);

// Worst case over fine-grained ratings.
int overall_rating(std::span<const int> fine);

} // namespace sasrate
