#include "cadyn/factors.hpp"

namespace cadyn {

FactorOutcome build_periodic_factor(const CellularAutomaton& ca, const Configuration& x, Window window, const OrbitBounds& bounds) {
    FactorOutcome out;
    const ColumnPeriodResult column = column_period(ca, x, window, bounds);
    if (!column.conclusive) {
        out.failure = column.reason;
        return out;
    }
    const std::size_t m = column.period.preperiod;
    const std::size_t p = column.period.period;
    out.column_period = p;
    auto row = [&](std::size_t i) -> const Word& { return column.rows[m + i]; };

    // Largest divisor q of p for which each row has a single residue mod q.
    std::size_t q = 1;
    for (std::size_t cand = p; cand >= 1; --cand) {
        if (p % cand != 0) continue;
        bool ok = true;
        for (std::size_t i = 0; i < p && ok; ++i)
            for (std::size_t j = i + 1; j < p && ok; ++j)
                if (row(i) == row(j) && (j - i) % cand != 0) ok = false;
        if (ok) {
            q = cand;
            break;
        }
    }

    PeriodicFactor f;
    f.p = q;
    f.m = m;
    f.window = window;
    f.generator = x;
    for (std::size_t i = 0; i < p; ++i)
        if (f.assignment.emplace(row(i), i % q).second) f.class_words.push_back(row(i));
    out.factor = std::move(f);
    return out;
}

bool verify_factor(const CellularAutomaton& ca, const PeriodicFactor& factor, const std::vector<Configuration>& test_points,
                   std::optional<std::size_t> horizon, std::size_t center_cap) {
    const std::size_t steps = horizon.value_or(4 * (factor.m + factor.p));
    for (const Configuration& y0 : test_points) {
        Configuration y = y0;
        auto it = factor.assignment.find(read_window(y, factor.window.first, factor.window.last));
        if (it == factor.assignment.end()) throw FactorError("test point outside W");
        std::size_t residue = it->second;
        for (std::size_t t = 0; t < steps; ++t) {
            try {
                y = step(ca, y, center_cap);
            } catch (const BudgetExceeded&) {
                return false;
            }
            it = factor.assignment.find(read_window(y, factor.window.first, factor.window.last));
            if (it == factor.assignment.end()) return false;
            if (it->second != (residue + 1) % factor.p) return false;
            residue = it->second;
        }
    }
    return true;
}

std::vector<Configuration> factor_representatives(const PeriodicFactor& factor) {
    std::vector<Configuration> out;
    for (const Word& c : factor.class_words) {
        const Coord len = static_cast<Coord>(c.size());
        out.emplace_back(canonicalize(PeriodicConfig{c, static_cast<std::size_t>(floor_mod(-factor.window.first, len))}));
    }
    return out;
}

}  // namespace cadyn
