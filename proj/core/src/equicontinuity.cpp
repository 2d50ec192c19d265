#include "cadyn/equicontinuity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace cadyn {

const char* to_string(VerdictKind kind) {
    switch (kind) {
        case VerdictKind::Certified: return "certified";
        case VerdictKind::Falsified: return "falsified";
        case VerdictKind::Unknown: return "unknown";
    }
    return "unknown";
}

Word BlockingCertificate::row(std::size_t t) const {
    const std::size_t m = period.preperiod;
    const std::size_t p = period.period;
    if (t < m + p) return rows.at(t);
    return rows.at(m + (t - m) % p);
}

TwoSidedConfig BlockingContext::around(const Word& word) const {
    Word center = left;
    center.insert(center.end(), word.begin(), word.end());
    center.insert(center.end(), right.begin(), right.end());
    return from_layout(Word{left_background}, center, Word{right_background}, -static_cast<Coord>(left.size()));
}

std::size_t blocking_width(const CellularAutomaton& ca) { return static_cast<std::size_t>(std::max(1, ca.radius())); }

// ---------------------------------------------------------------------------
// Certification by uncertainty-set propagation.
//
// U_0 = {word}; U_{n+1} = { F-block image of a.u.b : u in U_n, |a| = -left, |b| = right }.
// Every configuration in [word] has F^n(x)[0, |word|) in U_n, so an offset whose
// projection is a singleton at every step of a closed set sequence is blocking.

namespace {

struct SetHash {
    std::size_t operator()(const std::vector<std::uint64_t>& v) const noexcept {
        std::size_t h = 1469598103934665603ULL;
        for (auto x : v) h = (h ^ x) * 1099511628211ULL;
        return h;
    }
};

}  // namespace

CertificationRun certify_offsets(const CellularAutomaton& ca, const Word& word, std::size_t width, const BlockingBounds& bounds) {
    if (width == 0 || word.size() < width) throw std::invalid_argument("blocking width must satisfy 1 <= width <= |word|");
    const std::size_t k = ca.k();
    const std::size_t len = word.size();
    const std::size_t lpad = static_cast<std::size_t>(-ca.neighborhood().left);
    const std::size_t rpad = static_cast<std::size_t>(ca.neighborhood().right);
    const std::size_t offsets = len - width + 1;

    CertificationRun run;
    run.by_offset.resize(offsets);

    // Codes of length len + span must fit comfortably in 64 bits.
    double bits = static_cast<double>(len + lpad + rpad) * std::log2(static_cast<double>(k));
    if (bits > 62) {
        run.exhausted = true;
        return run;
    }
    const std::uint64_t left_combos = ipow(k, static_cast<unsigned>(lpad));
    const std::uint64_t right_combos = ipow(k, static_cast<unsigned>(rpad));
    const std::size_t span = lpad + rpad;
    const std::uint64_t table_mod = ca.table_size();

    std::vector<bool> alive(offsets, true);
    std::vector<std::vector<Word>> rows(offsets);
    std::unordered_map<std::vector<std::uint64_t>, std::size_t, SetHash> history;

    std::vector<std::uint64_t> current{encode(word, k)};
    Word ext(len + lpad + rpad);
    for (std::size_t n = 0;; ++n) {
        // Projection check.
        std::size_t living = 0;
        std::vector<Word> decoded;
        decoded.reserve(current.size());
        for (auto c : current) decoded.push_back(decode(c, len, k));
        for (std::size_t p = 0; p < offsets; ++p) {
            if (!alive[p]) continue;
            const auto first = decoded.front().begin() + static_cast<std::ptrdiff_t>(p);
            bool single = true;
            for (const Word& u : decoded)
                if (!std::equal(first, first + static_cast<std::ptrdiff_t>(width), u.begin() + static_cast<std::ptrdiff_t>(p))) {
                    single = false;
                    break;
                }
            if (!single) {
                alive[p] = false;
                continue;
            }
            rows[p].emplace_back(first, first + static_cast<std::ptrdiff_t>(width));
            ++living;
        }
        if (living == 0) return run;
        run.survived = n + 1;

        auto [it, fresh] = history.emplace(current, n);
        if (!fresh) {
            const std::size_t start = it->second;
            const std::size_t cycle = n - start;
            for (std::size_t p = 0; p < offsets; ++p) {
                if (!alive[p]) continue;
                BlockingCertificate cert;
                cert.word = word;
                cert.width = width;
                cert.offset = p;
                cert.period = minimal_period(rows[p], start, cycle);
                const std::size_t keep = cert.period.preperiod + cert.period.period;
                cert.rows.assign(rows[p].begin(), rows[p].begin() + static_cast<std::ptrdiff_t>(keep));
                run.by_offset[p] = std::move(cert);
            }
            return run;
        }
        if (n >= bounds.max_iterations || current.size() > bounds.max_set_size) {
            run.exhausted = true;
            return run;
        }

        std::vector<std::uint64_t> next;
        next.reserve(current.size() * left_combos * right_combos);
        for (const Word& u : decoded) {
            std::copy(u.begin(), u.end(), ext.begin() + static_cast<std::ptrdiff_t>(lpad));
            for (std::uint64_t a = 0; a < left_combos; ++a) {
                std::uint64_t rest = a;
                for (std::size_t i = lpad; i-- > 0;) {
                    ext[i] = static_cast<Letter>(rest % k);
                    rest /= k;
                }
                for (std::uint64_t b = 0; b < right_combos; ++b) {
                    rest = b;
                    for (std::size_t i = rpad; i-- > 0;) {
                        ext[lpad + len + i] = static_cast<Letter>(rest % k);
                        rest /= k;
                    }
                    std::uint64_t image = 0, window = 0;
                    for (std::size_t i = 0; i < ext.size(); ++i) {
                        window = (window * k + ext[i]) % table_mod;
                        if (i >= span) image = image * k + ca.lookup(window);
                    }
                    next.push_back(image);
                }
            }
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        current.swap(next);
    }
}

bool verify_blocking(const CellularAutomaton& ca, const BlockingCertificate& cert, const BlockingBounds& bounds) {
    if (cert.width == 0 || cert.word.size() < cert.width || cert.offset + cert.width > cert.word.size()) return false;
    for (Letter a : cert.word)
        if (a >= ca.k()) return false;
    const CertificationRun run = certify_offsets(ca, cert.word, cert.width, bounds);
    const auto& found = run.by_offset[cert.offset];
    return found && found->rows == cert.rows && found->period == cert.period;
}

// ---------------------------------------------------------------------------
// Falsification by bounded context enumeration.

namespace {

std::optional<Falsification> falsify(const CellularAutomaton& ca, const Word& word, std::size_t width, std::size_t offset,
                                     const BlockingBounds& bounds) {
    const std::size_t k = ca.k();
    const std::size_t lpad = static_cast<std::size_t>(-ca.neighborhood().left);
    const std::size_t rpad = static_cast<std::size_t>(ca.neighborhood().right);
    const std::size_t depth = bounds.depth.value_or(2 * word.size() + 32);

    // Backgrounds only matter on sides the rule can see.
    const std::size_t left_bgs = lpad > 0 ? k : 1;
    const std::size_t right_bgs = rpad > 0 ? k : 1;
    std::size_t budget = std::max<std::size_t>(1, bounds.max_contexts / (left_bgs * right_bgs));
    std::size_t cl = 0, cr = 0;
    for (bool grew = true; grew;) {
        grew = false;
        const bool left_first = cl <= cr;
        for (int side = 0; side < 2 && !grew; ++side) {
            const bool try_left = (side == 0) == left_first;
            if (try_left && lpad > 0 && cl < depth * lpad && ipow(k, static_cast<unsigned>(cl + cr + 1)) <= budget) {
                ++cl;
                grew = true;
            } else if (!try_left && rpad > 0 && cr < depth * rpad && ipow(k, static_cast<unsigned>(cl + cr + 1)) <= budget) {
                ++cr;
                grew = true;
            }
        }
    }

    const std::size_t lfill = depth * lpad;
    const std::size_t rfill = depth * rpad;
    const std::uint64_t combos = ipow(k, static_cast<unsigned>(cl + cr));

    auto simulate = [&](const BlockingContext& ctx) {
        Word cells;
        cells.reserve(lfill + cl + word.size() + cr + rfill);
        cells.insert(cells.end(), lfill, ctx.left_background);
        cells.insert(cells.end(), ctx.left.begin(), ctx.left.end());
        cells.insert(cells.end(), word.begin(), word.end());
        cells.insert(cells.end(), ctx.right.begin(), ctx.right.end());
        cells.insert(cells.end(), rfill, ctx.right_background);
        std::vector<Word> rows;
        rows.reserve(depth + 1);
        std::size_t origin = lfill + cl;  // index of word[0] in `cells`
        for (std::size_t t = 0;; ++t) {
            const auto first = cells.begin() + static_cast<std::ptrdiff_t>(origin + offset);
            rows.emplace_back(first, first + static_cast<std::ptrdiff_t>(width));
            if (t == depth) break;
            cells = ca.apply_block(cells);
            origin -= lpad;
        }
        return rows;
    };

    std::optional<BlockingContext> reference;
    std::vector<Word> reference_rows;
    std::optional<Falsification> best;
    for (std::size_t bl = 0; bl < left_bgs; ++bl)
        for (std::size_t br = 0; br < right_bgs; ++br)
            for (std::uint64_t code = 0; code < combos; ++code) {
                const Word ctx_word = decode(code, cl + cr, k);
                BlockingContext ctx{static_cast<Letter>(bl), Word(ctx_word.begin(), ctx_word.begin() + static_cast<std::ptrdiff_t>(cl)),
                                    Word(ctx_word.begin() + static_cast<std::ptrdiff_t>(cl), ctx_word.end()), static_cast<Letter>(br)};
                auto rows = simulate(ctx);
                if (!reference) {
                    reference = ctx;
                    reference_rows = std::move(rows);
                    continue;
                }
                const std::size_t limit = best ? best->time : depth + 1;
                for (std::size_t t = 0; t < limit; ++t)
                    if (rows[t] != reference_rows[t]) {
                        best = Falsification{*reference, ctx, t};
                        break;
                    }
            }
    return best;
}

}  // namespace

BlockingVerdict check_blocking(const CellularAutomaton& ca, const Word& word, std::size_t width, std::size_t offset,
                               const BlockingBounds& bounds) {
    if (width == 0 || word.size() < width || offset + width > word.size())
        throw std::invalid_argument("check_blocking needs 1 <= width <= |word| and offset <= |word| - width");
    BlockingVerdict verdict;
    const CertificationRun run = certify_offsets(ca, word, width, bounds);
    if (run.by_offset[offset]) {
        verdict.kind = VerdictKind::Certified;
        verdict.certificate = run.by_offset[offset];
        return verdict;
    }
    if (auto f = falsify(ca, word, width, offset, bounds)) {
        verdict.kind = VerdictKind::Falsified;
        verdict.falsification = std::move(f);
        return verdict;
    }
    verdict.note = run.exhausted ? "certification bounds reached; no disagreement found" : "uncertainty set leaked; no disagreement found";
    return verdict;
}

BlockingScan scan_blocking_words(const CellularAutomaton& ca, std::size_t width, std::size_t max_len, const BlockingBounds& bounds) {
    if (max_len < width) throw std::invalid_argument("max_len must be at least the blocking width");
    BlockingScan scan;
    scan.width = width;
    scan.max_len = max_len;
    for (std::size_t len = width; len <= max_len; ++len) {
        const std::uint64_t count = ipow(ca.k(), static_cast<unsigned>(len));
        for (std::uint64_t code = 0; code < count; ++code) {
            Word word = decode(code, len, ca.k());
            CertificationRun run = certify_offsets(ca, word, width, bounds);
            bool any = false;
            for (auto& cert : run.by_offset)
                if (cert) {
                    scan.certificates.push_back(std::move(*cert));
                    any = true;
                }
            if (!any && run.survived > 0) scan.near_misses.push_back({std::move(word), run.survived});
        }
    }
    std::stable_sort(scan.near_misses.begin(), scan.near_misses.end(),
                     [](const NearMiss& a, const NearMiss& b) { return a.survived > b.survived; });
    return scan;
}

std::vector<BlockingCertificate> find_blocking_words(const CellularAutomaton& ca, std::size_t width, std::size_t max_len,
                                                     const BlockingBounds& bounds) {
    return scan_blocking_words(ca, width, max_len, bounds).certificates;
}

// ---------------------------------------------------------------------------
// Equicontinuity: F^(m+p) = F^m, compared on composite rule tables.

EquicontinuitySearch find_eventual_periodicity(const CellularAutomaton& ca, std::size_t max_total, std::size_t table_budget) {
    const std::size_t k = ca.k();
    const std::size_t d = static_cast<std::size_t>(ca.span());
    const std::size_t rpad = static_cast<std::size_t>(ca.neighborhood().right);

    // tables[t] maps words of length t*d + 1 to F^t of their middle cell.
    std::vector<std::vector<Letter>> tables;
    tables.emplace_back(k);
    for (std::size_t a = 0; a < k; ++a) tables[0][a] = static_cast<Letter>(a);

    EquicontinuitySearch out;
    for (std::size_t t = 1; t <= max_total; ++t) {
        const unsigned width = static_cast<unsigned>(t * d + 1);
        const double entries = std::pow(static_cast<double>(k), width);
        if (entries > static_cast<double>(table_budget)) break;
        const std::size_t size = static_cast<std::size_t>(ipow(k, width));
        const std::vector<Letter>& prev = tables.back();
        const std::uint64_t prev_mod = ipow(k, static_cast<unsigned>((t - 1) * d + 1));
        std::vector<Letter> table(size);
        Word inner(d + 1);
        for (std::size_t code = 0; code < size; ++code) {
            // Apply F^(t-1) at each of the d+1 positions, then the local rule.
            for (std::size_t j = 0; j <= d; ++j) {
                const std::uint64_t shifted = code / ipow(k, static_cast<unsigned>(d - j));
                inner[j] = prev[shifted % prev_mod];
            }
            table[code] = ca.lookup(encode(inner, k));
        }
        tables.push_back(std::move(table));

        const std::vector<Letter>& full = tables.back();
        for (std::size_t m = 0; m < t; ++m) {
            const std::size_t p = t - m;
            const std::uint64_t sub_mod = ipow(k, static_cast<unsigned>(m * d + 1));
            const std::uint64_t sub_div = ipow(k, static_cast<unsigned>(p * rpad));
            const std::vector<Letter>& shorter = tables[m];
            bool same = true;
            for (std::size_t code = 0; code < size && same; ++code) same = full[code] == shorter[(code / sub_div) % sub_mod];
            if (same) {
                out.period = EventualPeriod{m, p};
                out.checked_total = t;
                return out;
            }
        }
        out.checked_total = t;
    }
    return out;
}

KurkaReport classify_kurka(const CellularAutomaton& ca, const KurkaBounds& bounds, const BlockingScan* scan) {
    KurkaReport report;
    report.blocking_width = blocking_width(ca);
    if (scan && scan->width == report.blocking_width && scan->max_len == std::max(bounds.max_len, report.blocking_width))
        report.certificates = scan->certificates;
    else
        report.certificates = find_blocking_words(ca, report.blocking_width, std::max(bounds.max_len, report.blocking_width), bounds.blocking);
    report.has_equicontinuity_points = !report.certificates.empty();
    report.sensitive_candidate = !report.has_equicontinuity_points;
    const auto search = find_eventual_periodicity(ca, bounds.max_total, bounds.table_budget);
    report.equicontinuous = search.period.has_value();
    report.equicontinuity_period = search.period;
    report.checked_total = search.checked_total;
    return report;
}

}  // namespace cadyn
