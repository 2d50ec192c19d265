#include "cadyn/config.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

namespace cadyn {

Coord floor_mod(Coord a, Coord n) {
    Coord r = a % n;
    return r < 0 ? r + n : r;
}

Coord checked_add(Coord a, Coord b) {
    Coord out = 0;
    if (__builtin_add_overflow(a, b, &out)) throw CoordinateOverflow("coordinate overflow");
    return out;
}

namespace {

Coord checked_sub(Coord a, Coord b) {
    Coord out = 0;
    if (__builtin_sub_overflow(a, b, &out)) throw CoordinateOverflow("coordinate overflow");
    return out;
}

Coord len(const Word& w) { return static_cast<Coord>(w.size()); }

void require_tails(const TwoSidedConfig& cfg) {
    if (cfg.left.empty() || cfg.right.empty()) throw std::invalid_argument("two-sided configuration needs nonempty tails");
}

Letter tail_at(const Word& tail, Coord i) { return tail[static_cast<std::size_t>(floor_mod(i, len(tail)))]; }

// Image of a tail pattern (anchored at 0) under the local rule.
Word step_tail(const CellularAutomaton& ca, const Word& tail) {
    const Neighborhood nb = ca.neighborhood();
    const Coord n = len(tail);
    Word scratch;
    scratch.reserve(tail.size() + static_cast<std::size_t>(nb.span()));
    for (Coord i = nb.left; i < n + nb.right; ++i) scratch.push_back(tail_at(tail, i));
    return ca.apply_block(scratch);
}

}  // namespace

Word primitive_root(const Word& w) {
    const std::size_t n = w.size();
    if (n == 0) return w;
    std::vector<std::size_t> pi(n, 0);
    for (std::size_t i = 1; i < n; ++i) {
        std::size_t j = pi[i - 1];
        while (j > 0 && w[i] != w[j]) j = pi[j - 1];
        if (w[i] == w[j]) ++j;
        pi[i] = j;
    }
    const std::size_t p = n - pi[n - 1];
    if (n % p != 0) return w;
    return Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(p));
}

std::size_t least_rotation(const Word& w) {
    const std::size_t n = w.size();
    std::size_t i = 0, j = 1, k = 0;
    while (i < n && j < n && k < n) {
        const Letter a = w[(i + k) % n];
        const Letter b = w[(j + k) % n];
        if (a == b) {
            ++k;
            continue;
        }
        if (a > b)
            i += k + 1;
        else
            j += k + 1;
        if (i == j) ++j;
        k = 0;
    }
    return n == 0 ? 0 : std::min(i, j);
}

Word rotate_left(const Word& w, std::size_t by) {
    if (w.empty()) return w;
    Word out(w.size());
    for (std::size_t q = 0; q < w.size(); ++q) out[q] = w[(q + by) % w.size()];
    return out;
}

// ---------------------------------------------------------------------------
// PeriodicConfig

PeriodicConfig canonicalize(const PeriodicConfig& cfg) {
    if (cfg.word.empty()) throw std::invalid_argument("periodic configuration needs a nonempty word");
    Word root = primitive_root(cfg.word);
    const std::size_t n = root.size();
    const std::size_t s = least_rotation(root);
    PeriodicConfig out;
    out.word = rotate_left(root, s);
    out.phase = static_cast<std::size_t>(floor_mod(static_cast<Coord>(cfg.phase % n) - static_cast<Coord>(s), static_cast<Coord>(n)));
    return out;
}

Letter read_at(const PeriodicConfig& cfg, Coord i) {
    const Coord n = len(cfg.word);
    return cfg.word[static_cast<std::size_t>(floor_mod(floor_mod(i, n) + static_cast<Coord>(cfg.phase % cfg.word.size()), n))];
}

PeriodicConfig step(const CellularAutomaton& ca, const PeriodicConfig& cfg) {
    const Neighborhood nb = ca.neighborhood();
    const Coord n = len(cfg.word);
    Word scratch;
    scratch.reserve(cfg.word.size() + static_cast<std::size_t>(nb.span()));
    for (Coord i = nb.left; i < n + nb.right; ++i) scratch.push_back(read_at(cfg, i));
    return canonicalize(PeriodicConfig{ca.apply_block(scratch), 0});
}

PeriodicConfig shift_by(const PeriodicConfig& cfg, Coord k) {
    const Coord n = len(cfg.word);
    return canonicalize(PeriodicConfig{cfg.word, static_cast<std::size_t>(floor_mod(floor_mod(k, n) + static_cast<Coord>(cfg.phase % cfg.word.size()), n))});
}

bool equals(const PeriodicConfig& a, const PeriodicConfig& b) { return canonicalize(a) == canonicalize(b); }

// ---------------------------------------------------------------------------
// TwoSidedConfig

Letter read_at(const TwoSidedConfig& cfg, Coord i) {
    require_tails(cfg);
    if (i < cfg.anchor) return tail_at(cfg.left, i);
    const Coord offset = i - cfg.anchor;
    if (offset < len(cfg.center)) return cfg.center[static_cast<std::size_t>(offset)];
    return tail_at(cfg.right, i);
}

TwoSidedConfig canonicalize(const TwoSidedConfig& cfg) {
    require_tails(cfg);
    TwoSidedConfig in{primitive_root(cfg.left), cfg.center, primitive_root(cfg.right), cfg.anchor};
    const Coord end = checked_add(in.anchor, len(in.center));
    const bool same_tails = in.left == in.right;

    // First coordinate where x leaves the left tail pattern.
    Coord first = in.anchor;
    while (first < end && in.center[static_cast<std::size_t>(first - in.anchor)] == tail_at(in.left, first)) ++first;
    if (first == end) {
        if (same_tails) return TwoSidedConfig{in.left, {}, in.left, 0};
        // Distinct primitive patterns disagree within |left| + |right| positions.
        while (tail_at(in.right, first) == tail_at(in.left, first)) first = checked_add(first, 1);
    }

    // Least e such that x follows the right tail pattern on [e, inf).
    Coord last = end;
    while (last > in.anchor && in.center[static_cast<std::size_t>(last - 1 - in.anchor)] == tail_at(in.right, last - 1)) --last;
    if (last == in.anchor && !same_tails) {
        while (tail_at(in.left, last - 1) == tail_at(in.right, last - 1)) last = checked_sub(last, 1);
    }

    TwoSidedConfig out{in.left, {}, in.right, last};
    if (first < last) {
        out.anchor = first;
        out.center.reserve(static_cast<std::size_t>(last - first));
        for (Coord i = first; i < last; ++i) out.center.push_back(read_at(in, i));
    }
    return out;
}

TwoSidedConfig step(const CellularAutomaton& ca, const TwoSidedConfig& cfg, std::size_t center_cap) {
    require_tails(cfg);
    const Neighborhood nb = ca.neighborhood();
    // The image agrees with the tail images outside [anchor - right, anchor + |center| - left).
    const Coord lo = checked_sub(cfg.anchor, nb.right);
    const Coord hi = checked_sub(checked_add(cfg.anchor, len(cfg.center)), nb.left);
    Word scratch;
    scratch.reserve(static_cast<std::size_t>(hi - lo) + static_cast<std::size_t>(nb.span()));
    for (Coord i = lo + nb.left; i < hi + nb.right; ++i) scratch.push_back(read_at(cfg, i));
    TwoSidedConfig image{step_tail(ca, cfg.left), ca.apply_block(scratch), step_tail(ca, cfg.right), lo};
    TwoSidedConfig out = canonicalize(image);
    if (out.center.size() > center_cap)
        throw BudgetExceeded("center grew to " + std::to_string(out.center.size()) + " letters (cap " + std::to_string(center_cap) + ")");
    return out;
}

TwoSidedConfig shift_by(const TwoSidedConfig& cfg, Coord k) {
    require_tails(cfg);
    TwoSidedConfig out;
    out.left = rotate_left(cfg.left, static_cast<std::size_t>(floor_mod(k, len(cfg.left))));
    out.right = rotate_left(cfg.right, static_cast<std::size_t>(floor_mod(k, len(cfg.right))));
    out.center = cfg.center;
    out.anchor = checked_sub(cfg.anchor, k);
    return canonicalize(out);
}

TwoSidedConfig embed(const PeriodicConfig& cfg) {
    const PeriodicConfig c = canonicalize(cfg);
    const Word tail = rotate_left(c.word, c.phase);
    return TwoSidedConfig{tail, {}, tail, 0};
}

std::optional<PeriodicConfig> is_spatially_periodic(const TwoSidedConfig& cfg) {
    const TwoSidedConfig c = canonicalize(cfg);
    if (!c.center.empty() || c.left != c.right) return std::nullopt;
    return canonicalize(PeriodicConfig{c.left, 0});
}

bool equals(const TwoSidedConfig& a, const TwoSidedConfig& b) { return canonicalize(a) == canonicalize(b); }

TwoSidedConfig from_layout(const Word& left_block, const Word& center, const Word& right_block, Coord anchor) {
    if (left_block.empty() || right_block.empty()) throw std::invalid_argument("two-sided configuration needs nonempty tails");
    TwoSidedConfig out;
    out.left = rotate_left(left_block, static_cast<std::size_t>(floor_mod(-anchor, len(left_block))));
    const Coord right_start = checked_add(anchor, len(center));
    out.right = rotate_left(right_block, static_cast<std::size_t>(floor_mod(-right_start, len(right_block))));
    out.center = center;
    out.anchor = anchor;
    return canonicalize(out);
}

Word left_block(const TwoSidedConfig& cfg) {
    return rotate_left(cfg.left, static_cast<std::size_t>(floor_mod(cfg.anchor, len(cfg.left))));
}

Word right_block(const TwoSidedConfig& cfg) {
    return rotate_left(cfg.right, static_cast<std::size_t>(floor_mod(cfg.anchor + len(cfg.center), len(cfg.right))));
}

// ---------------------------------------------------------------------------
// Variant helpers

Letter read_at(const Configuration& cfg, Coord i) {
    return std::visit([i](const auto& c) { return read_at(c, i); }, cfg);
}

Word read_window(const Configuration& cfg, Coord first, Coord last) {
    Word out;
    if (last < first) return out;
    out.reserve(static_cast<std::size_t>(last - first + 1));
    for (Coord i = first; i <= last; ++i) out.push_back(read_at(cfg, i));
    return out;
}

Configuration step(const CellularAutomaton& ca, const Configuration& cfg, std::size_t center_cap) {
    if (const auto* p = std::get_if<PeriodicConfig>(&cfg)) return step(ca, *p);
    return step(ca, std::get<TwoSidedConfig>(cfg), center_cap);
}

bool equals(const Configuration& a, const Configuration& b) {
    auto as_two_sided = [](const Configuration& c) {
        if (const auto* p = std::get_if<PeriodicConfig>(&c)) return embed(*p);
        return canonicalize(std::get<TwoSidedConfig>(c));
    };
    return as_two_sided(a) == as_two_sided(b);
}

// ---------------------------------------------------------------------------
// Literals

namespace {

std::string_view trim_view(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\n' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\n' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

Coord parse_coord(std::string_view text) {
    text = trim_view(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    Coord v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw RuleError(RuleError::Kind::Syntax, "bad coordinate '" + std::string(text) + "'");
    return v;
}

// Reads "^(...)^" at the front of `text`, returning the inner text.
std::string_view take_block(std::string_view& text) {
    text = trim_view(text);
    if (text.substr(0, 2) != "^(") throw RuleError(RuleError::Kind::Syntax, "expected '^(' in configuration literal");
    const std::size_t close = text.find(")^", 2);
    if (close == std::string_view::npos) throw RuleError(RuleError::Kind::Syntax, "unterminated '^(' block");
    std::string_view inner = text.substr(2, close - 2);
    text.remove_prefix(close + 2);
    return inner;
}

}  // namespace

Configuration parse_config(const Alphabet& alphabet, std::string_view text) {
    std::string_view rest = text;
    const Word first = alphabet.parse_word(take_block(rest));
    if (first.empty()) throw RuleError(RuleError::Kind::Syntax, "empty tail word");
    rest = trim_view(rest);
    if (rest.empty() || rest.front() == '@') {
        Coord phase = rest.empty() ? 0 : parse_coord(rest.substr(1));
        return canonicalize(PeriodicConfig{first, static_cast<std::size_t>(floor_mod(phase, len(first)))});
    }
    const std::size_t open = rest.find("^(");
    if (open == std::string_view::npos) throw RuleError(RuleError::Kind::Syntax, "expected right tail '^(...)^'");
    const Word center = alphabet.parse_word(rest.substr(0, open));
    rest.remove_prefix(open);
    const Word second = alphabet.parse_word(take_block(rest));
    if (second.empty()) throw RuleError(RuleError::Kind::Syntax, "empty tail word");
    rest = trim_view(rest);
    Coord anchor = 0;
    if (!rest.empty()) {
        if (rest.front() != '@') throw RuleError(RuleError::Kind::Syntax, "trailing text '" + std::string(rest) + "'");
        anchor = parse_coord(rest.substr(1));
    }
    return from_layout(first, center, second, anchor);
}

std::string format_config(const Alphabet& alphabet, const PeriodicConfig& cfg) {
    const PeriodicConfig c = canonicalize(cfg);
    std::string out = "^(" + alphabet.format_word(c.word) + ")^";
    if (c.phase != 0) out += "@" + std::to_string(c.phase);
    return out;
}

std::string format_config(const Alphabet& alphabet, const TwoSidedConfig& cfg) {
    const TwoSidedConfig c = canonicalize(cfg);
    std::string out = "^(" + alphabet.format_word(left_block(c)) + ")^ ";
    if (!c.center.empty()) out += alphabet.format_word(c.center) + " ";
    out += "^(" + alphabet.format_word(right_block(c)) + ")^ @" + std::to_string(c.anchor);
    return out;
}

std::string format_config(const Alphabet& alphabet, const Configuration& cfg) {
    return std::visit([&](const auto& c) { return format_config(alphabet, c); }, cfg);
}

// ---------------------------------------------------------------------------

namespace {
std::size_t hash_word(std::size_t h, const Word& w) {
    for (Letter a : w) h = (h ^ a) * 1099511628211ULL;
    return (h ^ w.size()) * 1099511628211ULL;
}
}  // namespace

std::size_t ConfigHash::operator()(const PeriodicConfig& c) const noexcept {
    return hash_word(14695981039346656037ULL ^ c.phase, c.word);
}

std::size_t ConfigHash::operator()(const TwoSidedConfig& c) const noexcept {
    std::size_t h = 14695981039346656037ULL ^ static_cast<std::size_t>(c.anchor);
    h = hash_word(h, c.left);
    h = hash_word(h, c.center);
    return hash_word(h, c.right);
}

}  // namespace cadyn
