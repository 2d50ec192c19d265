#include "cadyn/gilman.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace cadyn {

std::vector<double> MeasureSpec::resolved(std::size_t k) const {
    if (weights.empty()) return std::vector<double>(k, 1.0 / static_cast<double>(k));
    if (weights.size() != k) throw std::invalid_argument("measure needs one weight per letter");
    double sum = 0;
    for (double w : weights) {
        if (!(w > 0)) throw std::invalid_argument("measure weights must be positive");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("measure weights must sum to 1");
    return weights;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

const char* to_string(GilmanClass c) {
    switch (c) {
        case GilmanClass::A: return "A";
        case GilmanClass::B: return "B";
        case GilmanClass::C: return "C";
        case GilmanClass::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

namespace {

// Finite simulation of the window's dependence cone.
class ConeSampler {
public:
    ConeSampler(const CellularAutomaton& ca, const Configuration& x, const RatioQuery& q)
        : ca_(ca), q_(q), cumulative_(q.measure.resolved(ca.k())) {
        if (q.m < 1 || q.n < q.m || q.horizon < 1 || q.samples < 1)
            throw std::invalid_argument("estimate_ratio needs m >= 1, n >= m, horizon >= 1, samples >= 1");
        for (std::size_t i = 1; i < cumulative_.size(); ++i) cumulative_[i] += cumulative_[i - 1];
        const Coord m = static_cast<Coord>(q.m);
        const Coord horizon = static_cast<Coord>(q.horizon);
        lo_ = -m + horizon * ca.neighborhood().left;
        hi_ = m + horizon * ca.neighborhood().right;
        base_.resize(static_cast<std::size_t>(hi_ - lo_ + 1));
        for (Coord i = lo_; i <= hi_; ++i) base_[static_cast<std::size_t>(i - lo_)] = read_at(x, i);

        // Reference window rows of x itself.
        Word cells = base_;
        reference_.reserve(q.horizon + 1);
        reference_.push_back(window(cells, 0));
        for (std::size_t t = 1; t <= q.horizon; ++t) {
            advance(cells, t);
            reference_.push_back(window(cells, t));
        }
    }

    bool agrees(std::size_t sample_index) const {
        std::mt19937_64 rng(splitmix64(q_.seed ^ splitmix64(static_cast<std::uint64_t>(sample_index))));
        Word cells = base_;
        const Coord n = static_cast<Coord>(q_.n);
        for (Coord i = lo_; i <= hi_; ++i)
            if (i < -n || i > n) cells[static_cast<std::size_t>(i - lo_)] = draw(rng);
        for (std::size_t t = 1; t <= q_.horizon; ++t) {
            advance(cells, t);
            const std::size_t off = offset(t);
            if (!std::equal(reference_[t].begin(), reference_[t].end(), cells.begin() + static_cast<std::ptrdiff_t>(off))) return false;
        }
        return true;
    }

private:
    Letter draw(std::mt19937_64& rng) const {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        for (std::size_t a = 0; a + 1 < cumulative_.size(); ++a)
            if (u < cumulative_[a]) return static_cast<Letter>(a);
        return static_cast<Letter>(cumulative_.size() - 1);
    }

    // After t steps the array holds coordinates [lo - t*left, hi - t*right].
    std::size_t offset(std::size_t t) const {
        return static_cast<std::size_t>(q_.horizon - t) * static_cast<std::size_t>(-ca_.neighborhood().left);
    }

    Word window(const Word& cells, std::size_t t) const {
        const auto first = cells.begin() + static_cast<std::ptrdiff_t>(offset(t));
        return Word(first, first + static_cast<std::ptrdiff_t>(2 * q_.m + 1));
    }

    // In-place block map: cell j only reads cells j..j+d, so overwriting j is safe.
    void advance(Word& cells, std::size_t t) const {
        const std::size_t d = static_cast<std::size_t>(ca_.span());
        const std::size_t len = base_.size() - (t - 1) * d;
        const std::uint64_t k = ca_.k();
        const std::uint64_t mod = ca_.table_size();
        std::uint64_t code = 0;
        for (std::size_t i = 0; i < d; ++i) code = code * k + cells[i];
        for (std::size_t j = 0; j + d < len; ++j) {
            code = (code * k + cells[j + d]) % mod;
            cells[j] = ca_.lookup(code);
        }
    }

    const CellularAutomaton& ca_;
    RatioQuery q_;
    std::vector<double> cumulative_;
    Coord lo_ = 0, hi_ = 0;
    Word base_;
    std::vector<Word> reference_;
};

}  // namespace

bool sample_agrees(const CellularAutomaton& ca, const Configuration& x, const RatioQuery& query, std::size_t sample_index) {
    return ConeSampler(ca, x, query).agrees(sample_index);
}

RatioPoint estimate_ratio(const CellularAutomaton& ca, const Configuration& x, const RatioQuery& query) {
    const ConeSampler sampler(ca, x, query);
    RatioPoint point;
    point.n = query.n;
    point.samples = query.samples;
    for (std::size_t s = 0; s < query.samples; ++s)
        if (sampler.agrees(s)) ++point.agreeing;
    point.ratio = static_cast<double>(point.agreeing) / static_cast<double>(point.samples);
    point.half_width = 1.96 * std::sqrt(point.ratio * (1 - point.ratio) / static_cast<double>(point.samples));
    return point;
}

std::vector<PeriodicConfig> periodic_candidates(std::size_t k, std::size_t max_len) {
    std::vector<PeriodicConfig> out;
    for (std::size_t len = 1; len <= max_len; ++len) {
        const std::uint64_t count = ipow(k, static_cast<unsigned>(len));
        for (std::uint64_t code = 0; code < count; ++code) {
            Word word = decode(code, len, k);
            if (primitive_root(word).size() == len && least_rotation(word) == 0) out.push_back(PeriodicConfig{std::move(word), 0});
        }
    }
    return out;
}

GilmanReport classify_gilman(const CellularAutomaton& ca, const GilmanParams& params, const BlockingScan* scan) {
    GilmanReport report;
    report.params = params;
    if (report.params.windows.empty()) report.params.windows = {static_cast<std::size_t>(std::max(1, ca.radius()))};
    const GilmanParams& p = report.params;
    if (p.n_multipliers.empty()) throw std::invalid_argument("gilman n schedule is empty");

    const std::size_t width = blocking_width(ca);
    const std::size_t max_len = std::max(p.blocking_max_len, width);
    BlockingScan local;
    if (!scan || scan->width != width || scan->max_len != max_len) {
        local = scan_blocking_words(ca, width, max_len, p.blocking);
        scan = &local;
    }
    if (!scan->certificates.empty()) {
        report.cls = GilmanClass::A;
        report.statistical = false;
        report.certificates.assign(scan->certificates.begin(),
                                   scan->certificates.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(8, scan->certificates.size())));
        return report;
    }

    std::vector<PeriodicConfig> candidates = periodic_candidates(ca.k(), p.candidate_max_len);
    std::size_t added = 0;
    for (const NearMiss& miss : scan->near_misses) {
        if (added == p.near_miss_candidates) break;
        const PeriodicConfig c = canonicalize(PeriodicConfig{miss.word, 0});
        if (std::find(candidates.begin(), candidates.end(), c) != candidates.end()) continue;
        candidates.push_back(c);
        ++added;
    }

    std::vector<std::size_t> schedule = p.n_multipliers;
    std::sort(schedule.begin(), schedule.end());
    bool all_low = true;
    for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
        for (std::size_t m : p.windows) {
            RatioCurve curve{Configuration{candidates[ci]}, m, {}};
            auto point_at = [&](std::size_t mult) {
                RatioQuery q;
                q.m = m;
                q.n = m * mult;
                q.horizon = p.horizon;
                q.samples = p.samples;
                q.measure = p.measure;
                q.seed = splitmix64(p.seed ^ splitmix64((static_cast<std::uint64_t>(ci) << 40) ^ (static_cast<std::uint64_t>(m) << 20) ^ q.n));
                return estimate_ratio(ca, curve.x, q);
            };
            // The final point decides both the B test and the C test, so it goes first.
            const RatioPoint last = point_at(schedule.back());
            report.max_final_ratio = std::max(report.max_final_ratio, last.ratio);
            if (last.ratio >= p.c_threshold) all_low = false;
            if (last.ratio < p.b_threshold) {
                curve.points.push_back(last);
                report.curves.push_back(std::move(curve));
                continue;
            }
            for (std::size_t i = 0; i + 1 < schedule.size(); ++i) curve.points.push_back(point_at(schedule[i]));
            curve.points.push_back(last);
            bool rising = true;
            const std::size_t tail = std::min<std::size_t>(3, curve.points.size());
            for (std::size_t i = curve.points.size() - tail; i + 1 < curve.points.size(); ++i)
                rising = rising && curve.points[i].ratio <= curve.points[i + 1].ratio;
            report.curves.push_back(curve);
            if (rising) {
                report.cls = GilmanClass::B;
                report.b_curve = std::move(curve);
                return report;
            }
        }
    }
    report.cls = all_low ? GilmanClass::C : GilmanClass::Inconclusive;
    return report;
}

}  // namespace cadyn
