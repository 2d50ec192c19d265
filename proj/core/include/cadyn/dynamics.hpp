#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cadyn/config.hpp"

namespace cadyn {

// Inclusive coordinate interval [first, last].
struct Window {
    Coord first = 0;
    Coord last = 0;

    std::size_t width() const { return static_cast<std::size_t>(last - first + 1); }
    friend bool operator==(const Window&, const Window&) = default;
};

Window parse_window(std::string_view text);  // "i1:i2"

// Row t is F^t(generator) read on the window.
struct ColumnTrace {
    Window window;
    std::vector<Word> rows;
    Configuration generator;
};

struct OrbitBounds {
    std::size_t max_steps = 10'000;
    std::size_t center_cap = kDefaultCenterCap;
};

enum class OrbitStatus { Closed, BudgetExceeded };

// Result of canonical-form cycle detection. `cycle_point` is F^m(x) when closed.
struct OrbitCycle {
    OrbitStatus status = OrbitStatus::Closed;
    EventualPeriod period;
    std::optional<Configuration> cycle_point;
    std::string reason;

    bool closed() const { return status == OrbitStatus::Closed; }
};

ColumnTrace trace(const CellularAutomaton& ca, const Configuration& x, Window window, std::size_t steps,
                  std::size_t center_cap = kDefaultCenterCap);

// Periodic inputs always run to closure; bounds.max_steps only limits two-sided inputs.
OrbitCycle orbit_cycle(const CellularAutomaton& ca, const Configuration& x, const OrbitBounds& bounds = {});

// Minimal eventual period of a finite row sequence assumed periodic from `cycle_start` with period `cycle_len`.
EventualPeriod minimal_period(const std::vector<Word>& rows, std::size_t cycle_start, std::size_t cycle_len);

struct ColumnPeriodResult {
    bool conclusive = false;
    EventualPeriod period;
    std::vector<Word> rows;  // rows 0 .. m+p-1
    std::string reason;
};

ColumnPeriodResult column_period(const CellularAutomaton& ca, const Configuration& x, Window window, const OrbitBounds& bounds = {});

// Space-time diagrams. ASCII uses the letter itself when it is a single ASCII
// character, otherwise the palette character for its index.
std::string render_ascii(const Alphabet& alphabet, const ColumnTrace& trace);
// Binary PPM (P6), one pixel per cell, colours from a fixed palette by letter index.
std::string render_pixmap(const ColumnTrace& trace);

}  // namespace cadyn
