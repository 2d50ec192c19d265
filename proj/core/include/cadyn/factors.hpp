#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cadyn/dynamics.hpp"

namespace cadyn {

// pi(y) = residue of the window content of y; W is the union of the cylinders
// of the class words on `window`.
struct PeriodicFactor {
    std::size_t p = 1;
    std::size_t m = 0;
    Window window;
    std::vector<Word> class_words;  // distinct, in order of first appearance from row m
    std::map<Word, std::size_t> assignment;
    Configuration generator;
};

class FactorError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct FactorOutcome {
    std::optional<PeriodicFactor> factor;
    std::size_t column_period = 0;  // p before any collision reduction
    std::string failure;
};

FactorOutcome build_periodic_factor(const CellularAutomaton& ca, const Configuration& x, Window window, const OrbitBounds& bounds = {});

// Checks pi(F^(t+1)(y)) = pi(F^t(y)) + 1 mod p for t < horizon (default 4(m+p)).
// Throws FactorError when a test point starts outside W.
bool verify_factor(const CellularAutomaton& ca, const PeriodicFactor& factor, const std::vector<Configuration>& test_points,
                   std::optional<std::size_t> horizon = std::nullopt, std::size_t center_cap = kDefaultCenterCap);

// Spatially periodic representatives ^inf(c)^inf of each class word, placed on the window.
std::vector<Configuration> factor_representatives(const PeriodicFactor& factor);

}  // namespace cadyn
