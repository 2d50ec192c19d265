#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cadyn/config.hpp"
#include "cadyn/equicontinuity.hpp"

namespace cadyn {

// Bernoulli product measure. Empty weights mean uniform.
struct MeasureSpec {
    std::vector<double> weights;

    std::vector<double> resolved(std::size_t k) const;
};

struct RatioPoint {
    std::size_t n = 0;
    double ratio = 0;
    double half_width = 0;  // normal-approximation 95% half-width
    std::size_t samples = 0;
    std::size_t agreeing = 0;
};

struct RatioCurve {
    Configuration x;
    std::size_t m = 1;
    std::vector<RatioPoint> points;  // ascending n
};

struct RatioQuery {
    std::size_t m = 1;
    std::size_t n = 1;
    std::size_t horizon = 128;
    std::size_t samples = 2000;
    std::uint64_t seed = 0;
    MeasureSpec measure;
};

// Fraction of sampled y with y = x on [-n, n] whose [-m, m] window agrees with
// x's for `horizon` steps. Only the dependence cone of the window is sampled.
RatioPoint estimate_ratio(const CellularAutomaton& ca, const Configuration& x, const RatioQuery& query);

// Indicator for one sample; exposed for property tests.
bool sample_agrees(const CellularAutomaton& ca, const Configuration& x, const RatioQuery& query, std::size_t sample_index);

std::uint64_t splitmix64(std::uint64_t x);

enum class GilmanClass { A, B, C, Inconclusive };
const char* to_string(GilmanClass c);

struct GilmanParams {
    std::uint64_t seed = 0;
    MeasureSpec measure;
    std::vector<std::size_t> windows;  // values of m; empty means {radius}
    std::vector<std::size_t> n_multipliers{1, 2, 4, 8, 16};
    std::size_t horizon = 128;
    std::size_t samples = 2000;
    double b_threshold = 0.99;
    double c_threshold = 0.05;
    std::size_t blocking_max_len = 6;
    BlockingBounds blocking;
    std::size_t candidate_max_len = 4;
    std::size_t near_miss_candidates = 4;
};

struct GilmanReport {
    GilmanClass cls = GilmanClass::Inconclusive;
    bool statistical = true;  // false only for class A
    std::vector<BlockingCertificate> certificates;
    std::optional<RatioCurve> b_curve;
    // One curve per (candidate, m) examined; curves cut short after a low final ratio hold one point.
    std::vector<RatioCurve> curves;
    double max_final_ratio = 0;
    GilmanParams params;
};

// Spatially periodic candidates: primitive words up to max_len, one per rotation class.
std::vector<PeriodicConfig> periodic_candidates(std::size_t k, std::size_t max_len);

GilmanReport classify_gilman(const CellularAutomaton& ca, const GilmanParams& params, const BlockingScan* scan = nullptr);

}  // namespace cadyn
