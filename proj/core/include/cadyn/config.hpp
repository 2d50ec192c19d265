#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "cadyn/rule.hpp"

namespace cadyn {

// Raised when an exact operation would exceed a configured resource bound.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CoordinateOverflow : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

inline constexpr std::size_t kDefaultCenterCap = 4096;

// Spatially periodic configuration: x_i = word[(phase + i) mod |word|].
struct PeriodicConfig {
    Word word;
    std::size_t phase = 0;

    friend bool operator==(const PeriodicConfig&, const PeriodicConfig&) = default;
};

// Two tails and a finite center. Tails are anchored at coordinate 0:
//   x_i = center[i - anchor]         for anchor <= i < anchor + |center|
//   x_i = right[i mod |right|]       for i >= anchor + |center|
//   x_i = left[i mod |left|]         for i < anchor
// Canonical form: primitive tails, center trimmed maximally, and when the
// center is empty the anchor is the least valid tail boundary. Spatially
// periodic configurations canonicalize to left == right, empty center, anchor 0.
struct TwoSidedConfig {
    Word left;
    Word center;
    Word right;
    Coord anchor = 0;

    friend bool operator==(const TwoSidedConfig&, const TwoSidedConfig&) = default;
};

using Configuration = std::variant<PeriodicConfig, TwoSidedConfig>;

// Preperiod m and period p of an eventually periodic sequence.
struct EventualPeriod {
    std::size_t preperiod = 0;
    std::size_t period = 1;

    friend bool operator==(const EventualPeriod&, const EventualPeriod&) = default;
};

Coord floor_mod(Coord a, Coord n);
Coord checked_add(Coord a, Coord b);

// Word helpers.
Word primitive_root(const Word& w);
std::size_t least_rotation(const Word& w);
Word rotate_left(const Word& w, std::size_t by);

PeriodicConfig canonicalize(const PeriodicConfig& cfg);
TwoSidedConfig canonicalize(const TwoSidedConfig& cfg);

Letter read_at(const PeriodicConfig& cfg, Coord i);
Letter read_at(const TwoSidedConfig& cfg, Coord i);
Letter read_at(const Configuration& cfg, Coord i);
Word read_window(const Configuration& cfg, Coord first, Coord last);

PeriodicConfig step(const CellularAutomaton& ca, const PeriodicConfig& cfg);
// Throws BudgetExceeded if the canonical center grows past center_cap.
TwoSidedConfig step(const CellularAutomaton& ca, const TwoSidedConfig& cfg, std::size_t center_cap = kDefaultCenterCap);
Configuration step(const CellularAutomaton& ca, const Configuration& cfg, std::size_t center_cap = kDefaultCenterCap);

// sigma^k: result_i = cfg_{i+k}.
PeriodicConfig shift_by(const PeriodicConfig& cfg, Coord k);
TwoSidedConfig shift_by(const TwoSidedConfig& cfg, Coord k);

TwoSidedConfig embed(const PeriodicConfig& cfg);
std::optional<PeriodicConfig> is_spatially_periodic(const TwoSidedConfig& cfg);

bool equals(const PeriodicConfig& a, const PeriodicConfig& b);
bool equals(const TwoSidedConfig& a, const TwoSidedConfig& b);
bool equals(const Configuration& a, const Configuration& b);

// Builds a configuration from the human layout: `left_block` ends at anchor-1
// and repeats leftwards, `center` starts at anchor, `right_block` starts right
// after the center and repeats rightwards. Result is canonical.
TwoSidedConfig from_layout(const Word& left_block, const Word& center, const Word& right_block, Coord anchor);

// Tail blocks as laid out next to the center (inverse of from_layout).
Word left_block(const TwoSidedConfig& cfg);
Word right_block(const TwoSidedConfig& cfg);

// Literals: "^(u)^@phase" and "^(l)^ c ^(r)^ @anchor".
Configuration parse_config(const Alphabet& alphabet, std::string_view text);
std::string format_config(const Alphabet& alphabet, const PeriodicConfig& cfg);
std::string format_config(const Alphabet& alphabet, const TwoSidedConfig& cfg);
std::string format_config(const Alphabet& alphabet, const Configuration& cfg);

struct ConfigHash {
    std::size_t operator()(const PeriodicConfig& c) const noexcept;
    std::size_t operator()(const TwoSidedConfig& c) const noexcept;
};

}  // namespace cadyn
