#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cadyn/config.hpp"
#include "cadyn/dynamics.hpp"
#include "cadyn/equicontinuity.hpp"

namespace cadyn {

// (wv)^i wuw (uw)^i placed so that the central w starts at coordinate 0.
struct YSequenceElement {
    std::size_t i = 0;
    Word word;
    Window placement;
};

std::vector<YSequenceElement> build_y_sequence(const Word& w, const Word& u, const Word& v, std::size_t i_max);

// The limit point (wv)^inf wuw (uw)^inf with the central w at coordinate 0.
TwoSidedConfig y_prime(const Word& w, const Word& u, const Word& v);

// Spatially periodic configuration repeating the block y^(i) with its placement kept.
PeriodicConfig periodic_approximant(const YSequenceElement& element);

struct StpCertificate {
    TwoSidedConfig point;  // canonical, equal to F^preperiod(y')
    std::size_t temporal_period = 1;
    std::size_t preperiod = 0;
    std::string evidence;  // why the point is not shift-periodic
    Word w, u, v;
};

struct StpBounds {
    std::size_t max_steps = 10'000;
    std::size_t center_cap = kDefaultCenterCap;
};

struct StpOutcome {
    std::optional<StpCertificate> certificate;
    std::string failure;
};

// Throws std::invalid_argument for degenerate ingredients (|wv| != |wu|, u == v, empty w).
StpOutcome construct_stp(const CellularAutomaton& ca, const Word& w, const Word& u, const Word& v, const StpBounds& bounds = {});

bool verify_stp(const CellularAutomaton& ca, const StpCertificate& cert, std::size_t center_cap = kDefaultCenterCap);

// Returns "" when cfg is shift-periodic, else a short reason.
std::string non_periodicity_evidence(const TwoSidedConfig& cfg);

struct StpSearchBounds {
    std::size_t blocking_max_len = 6;
    BlockingBounds blocking;
    std::size_t max_words = 4;  // distinct blocking words tried
    std::size_t max_ingredient = 2;
    StpBounds orbit{1000, kDefaultCenterCap};
};

// Certificates deduplicated by canonical point, in discovery order
// (blocking word, then |u|, u, v lexicographic).
std::vector<StpCertificate> search_stp(const CellularAutomaton& ca, const StpSearchBounds& bounds = {}, const BlockingScan* scan = nullptr);

}  // namespace cadyn
