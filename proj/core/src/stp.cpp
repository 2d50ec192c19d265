#include "cadyn/stp.hpp"

#include <stdexcept>

namespace cadyn {

namespace {

void check_ingredients(const Word& w, const Word& u, const Word& v) {
    if (w.empty()) throw std::invalid_argument("w must be nonempty");
    if (u.size() != v.size()) throw std::invalid_argument("|wu| and |wv| must agree");
    if (u == v) throw std::invalid_argument("u and v must differ");
}

Word concat(std::initializer_list<const Word*> parts) {
    Word out;
    for (const Word* p : parts) out.insert(out.end(), p->begin(), p->end());
    return out;
}

}  // namespace

std::vector<YSequenceElement> build_y_sequence(const Word& w, const Word& u, const Word& v, std::size_t i_max) {
    check_ingredients(w, u, v);
    const Word wv = concat({&w, &v});
    const Word uw = concat({&u, &w});
    const Word core = concat({&w, &u, &w});
    std::vector<YSequenceElement> out;
    for (std::size_t i = 0; i <= i_max; ++i) {
        YSequenceElement e;
        e.i = i;
        for (std::size_t j = 0; j < i; ++j) e.word.insert(e.word.end(), wv.begin(), wv.end());
        e.word.insert(e.word.end(), core.begin(), core.end());
        for (std::size_t j = 0; j < i; ++j) e.word.insert(e.word.end(), uw.begin(), uw.end());
        const Coord first = -static_cast<Coord>(i * wv.size());
        e.placement = Window{first, first + static_cast<Coord>(e.word.size()) - 1};
        out.push_back(std::move(e));
    }
    return out;
}

TwoSidedConfig y_prime(const Word& w, const Word& u, const Word& v) {
    check_ingredients(w, u, v);
    return from_layout(concat({&w, &v}), concat({&w, &u, &w}), concat({&u, &w}), 0);
}

PeriodicConfig periodic_approximant(const YSequenceElement& element) {
    const Coord len = static_cast<Coord>(element.word.size());
    return canonicalize(PeriodicConfig{element.word, static_cast<std::size_t>(floor_mod(-element.placement.first, len))});
}

std::string non_periodicity_evidence(const TwoSidedConfig& cfg) {
    const TwoSidedConfig c = canonicalize(cfg);
    if (is_spatially_periodic(c)) return "";
    if (c.left != c.right) return "tail mismatch";
    return "center nonempty";
}

bool verify_stp(const CellularAutomaton& ca, const StpCertificate& cert, std::size_t center_cap) {
    if (cert.temporal_period == 0) return false;
    if (is_spatially_periodic(canonicalize(cert.point))) return false;
    try {
        // The claimed period must also be the least one.
        TwoSidedConfig x = cert.point;
        for (std::size_t t = 1; t <= cert.temporal_period; ++t) {
            x = step(ca, x, center_cap);
            if (equals(x, cert.point)) return t == cert.temporal_period;
        }
        return false;
    } catch (const BudgetExceeded&) {
        return false;
    }
}

StpOutcome construct_stp(const CellularAutomaton& ca, const Word& w, const Word& u, const Word& v, const StpBounds& bounds) {
    const TwoSidedConfig y = y_prime(w, u, v);
    StpOutcome out;
    const OrbitCycle orbit = orbit_cycle(ca, Configuration{y}, OrbitBounds{bounds.max_steps, bounds.center_cap});
    if (!orbit.closed()) {
        out.failure = orbit.reason;
        return out;
    }
    const TwoSidedConfig point = std::get<TwoSidedConfig>(*orbit.cycle_point);
    std::string evidence = non_periodicity_evidence(point);
    if (evidence.empty()) {
        out.failure = "cycle point is spatially periodic";
        return out;
    }
    StpCertificate cert{point, orbit.period.period, orbit.period.preperiod, std::move(evidence), w, u, v};
    if (!verify_stp(ca, cert, bounds.center_cap)) throw std::logic_error("constructed periodic point failed its own check");
    out.certificate = std::move(cert);
    return out;
}

std::vector<StpCertificate> search_stp(const CellularAutomaton& ca, const StpSearchBounds& bounds, const BlockingScan* scan) {
    const std::size_t width = blocking_width(ca);
    const std::size_t max_len = std::max(bounds.blocking_max_len, width);
    BlockingScan local;
    if (!scan || scan->width != width || scan->max_len != max_len) {
        local = scan_blocking_words(ca, width, max_len, bounds.blocking);
        scan = &local;
    }
    std::vector<Word> words;
    for (const BlockingCertificate& cert : scan->certificates) {
        if (words.size() == bounds.max_words) break;
        if (words.empty() || words.back() != cert.word) words.push_back(cert.word);
    }

    std::vector<StpCertificate> found;
    const std::size_t k = ca.k();
    for (const Word& w : words)
        for (std::size_t len = 1; len <= bounds.max_ingredient; ++len) {
            const std::uint64_t count = ipow(k, static_cast<unsigned>(len));
            for (std::uint64_t uc = 0; uc < count; ++uc)
                for (std::uint64_t vc = 0; vc < count; ++vc) {
                    if (uc == vc) continue;
                    StpOutcome outcome = construct_stp(ca, w, decode(uc, len, k), decode(vc, len, k), bounds.orbit);
                    if (!outcome.certificate) continue;
                    bool seen = false;
                    for (const auto& c : found) seen = seen || c.point == outcome.certificate->point;
                    if (!seen) found.push_back(std::move(*outcome.certificate));
                }
        }
    return found;
}

}  // namespace cadyn
