#include "cadyn/dynamics.hpp"

#include <array>
#include <charconv>
#include <limits>
#include <unordered_map>

namespace cadyn {

Window parse_window(std::string_view text) {
    const std::size_t colon = text.find(':');
    if (colon == std::string_view::npos) throw RuleError(RuleError::Kind::Syntax, "window must be i1:i2");
    auto parse = [](std::string_view s) {
        Coord v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size()) throw RuleError(RuleError::Kind::Syntax, "bad window bound '" + std::string(s) + "'");
        return v;
    };
    Window w{parse(text.substr(0, colon)), parse(text.substr(colon + 1))};
    if (w.last < w.first) throw RuleError(RuleError::Kind::Syntax, "empty window");
    return w;
}

ColumnTrace trace(const CellularAutomaton& ca, const Configuration& x, Window window, std::size_t steps, std::size_t center_cap) {
    ColumnTrace out{window, {}, x};
    out.rows.reserve(steps + 1);
    Configuration current = x;
    out.rows.push_back(read_window(current, window.first, window.last));
    for (std::size_t t = 0; t < steps; ++t) {
        current = step(ca, current, center_cap);
        out.rows.push_back(read_window(current, window.first, window.last));
    }
    return out;
}

namespace {

template <class Config>
OrbitCycle detect_cycle(Config x, std::size_t max_steps, auto&& advance) {
    std::unordered_map<Config, std::size_t, ConfigHash> seen;
    x = canonicalize(x);
    for (std::size_t t = 0;; ++t) {
        auto [it, fresh] = seen.emplace(x, t);
        if (!fresh) {
            OrbitCycle out;
            out.period = EventualPeriod{it->second, t - it->second};
            // Recover F^m(x) from the stored key.
            for (const auto& [cfg, time] : seen)
                if (time == it->second) out.cycle_point = Configuration{cfg};
            return out;
        }
        if (t >= max_steps) {
            OrbitCycle out;
            out.status = OrbitStatus::BudgetExceeded;
            out.reason = "no cycle within " + std::to_string(max_steps) + " steps";
            return out;
        }
        x = advance(x);
    }
}

}  // namespace

OrbitCycle orbit_cycle(const CellularAutomaton& ca, const Configuration& x, const OrbitBounds& bounds) {
    if (const auto* p = std::get_if<PeriodicConfig>(&x))
        return detect_cycle(*p, std::numeric_limits<std::size_t>::max(), [&](const PeriodicConfig& c) { return step(ca, c); });
    try {
        return detect_cycle(std::get<TwoSidedConfig>(x), bounds.max_steps,
                            [&](const TwoSidedConfig& c) { return step(ca, c, bounds.center_cap); });
    } catch (const BudgetExceeded& e) {
        OrbitCycle out;
        out.status = OrbitStatus::BudgetExceeded;
        out.reason = e.what();
        return out;
    }
}

EventualPeriod minimal_period(const std::vector<Word>& rows, std::size_t cycle_start, std::size_t cycle_len) {
    const std::size_t m = cycle_start;
    const std::size_t p = cycle_len;
    auto row = [&](std::size_t t) -> const Word& { return t < m + p ? rows[t] : rows[m + (t - m) % p]; };
    std::size_t q = p;
    for (std::size_t d = 1; d <= p; ++d) {
        if (p % d != 0) continue;
        bool ok = true;
        for (std::size_t t = m; t < m + p && ok; ++t) ok = row(t) == row(t + d);
        if (ok) {
            q = d;
            break;
        }
    }
    std::size_t start = m;
    while (start > 0 && row(start - 1) == row(start - 1 + q)) --start;
    return EventualPeriod{start, q};
}

ColumnPeriodResult column_period(const CellularAutomaton& ca, const Configuration& x, Window window, const OrbitBounds& bounds) {
    ColumnPeriodResult out;
    const OrbitCycle orbit = orbit_cycle(ca, x, bounds);
    if (!orbit.closed()) {
        out.reason = "inconclusive: " + orbit.reason;
        return out;
    }
    const std::size_t total = orbit.period.preperiod + orbit.period.period;
    const ColumnTrace rows = trace(ca, x, window, total - 1, bounds.center_cap);
    out.period = minimal_period(rows.rows, orbit.period.preperiod, orbit.period.period);
    out.rows.assign(rows.rows.begin(), rows.rows.begin() + static_cast<std::ptrdiff_t>(out.period.preperiod + out.period.period));
    out.conclusive = true;
    return out;
}

namespace {
constexpr std::string_view kPaletteChars = "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";

constexpr std::array<std::array<unsigned char, 3>, 16> kPaletteRgb{{
    {255, 255, 255}, {0, 0, 0}, {230, 25, 75}, {60, 180, 75}, {0, 130, 200}, {245, 130, 48}, {145, 30, 180}, {70, 240, 240},
    {240, 50, 230}, {210, 245, 60}, {250, 190, 190}, {0, 128, 128}, {170, 110, 40}, {128, 0, 0}, {128, 128, 0}, {0, 0, 128},
}};
}  // namespace

std::string render_ascii(const Alphabet& alphabet, const ColumnTrace& trace) {
    // Letter names are used only if all of them are single printable ASCII characters.
    bool plain = true;
    for (Letter a = 0; a < alphabet.size(); ++a) {
        const std::string& name = alphabet.name(a);
        plain = plain && name.size() == 1 && static_cast<unsigned char>(name[0]) >= 0x21 && static_cast<unsigned char>(name[0]) < 0x7f;
    }
    std::string out;
    for (const Word& row : trace.rows) {
        for (Letter a : row) out.push_back(plain ? alphabet.name(a)[0] : kPaletteChars[a % kPaletteChars.size()]);
        out.push_back('\n');
    }
    return out;
}

std::string render_pixmap(const ColumnTrace& trace) {
    const std::size_t width = trace.window.width();
    std::string out = "P6\n" + std::to_string(width) + " " + std::to_string(trace.rows.size()) + "\n255\n";
    for (const Word& row : trace.rows)
        for (Letter a : row) {
            const auto& rgb = kPaletteRgb[a % kPaletteRgb.size()];
            out.append(reinterpret_cast<const char*>(rgb.data()), 3);
        }
    return out;
}

}  // namespace cadyn
