#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cadyn/config.hpp"
#include "cadyn/dynamics.hpp"

namespace cadyn {

struct BlockingBounds {
    // Steps of the uncertainty-set sequence before giving up on certification.
    std::size_t max_iterations = 512;
    std::size_t max_set_size = std::size_t{1} << 16;
    // Falsification depth; defaults to 2*|word| + 32.
    std::optional<std::size_t> depth;
    // Number of simulated contexts (background pairs times context words) per falsification.
    std::size_t max_contexts = std::size_t{1} << 12;
};

// The window of `width` cells starting at `offset` inside `word` shows the same
// row sequence for every configuration in the cylinder [word] (word at 0).
// rows[0 .. m+p) determine the whole sequence via `period`.
struct BlockingCertificate {
    Word word;
    std::size_t width = 1;
    std::size_t offset = 0;
    std::vector<Word> rows;
    EventualPeriod period;

    Word row(std::size_t t) const;
};

// Configuration ^(left_background)^ left word right ^(right_background)^ with
// the word under test at coordinates [0, |word|).
struct BlockingContext {
    Letter left_background = 0;
    Word left;
    Word right;
    Letter right_background = 0;

    TwoSidedConfig around(const Word& word) const;
};

struct Falsification {
    BlockingContext first;
    BlockingContext second;
    std::size_t time = 0;  // first step where the window contents differ
};

enum class VerdictKind { Certified, Falsified, Unknown };

struct BlockingVerdict {
    VerdictKind kind = VerdictKind::Unknown;
    std::optional<BlockingCertificate> certificate;
    std::optional<Falsification> falsification;
    std::string note;
};

const char* to_string(VerdictKind kind);

// Over-approximate certification for every offset of `word` at once. Entry p is
// set when offset p is certified. `survived` counts the steps for which at least
// one offset kept a singleton projection.
struct CertificationRun {
    std::vector<std::optional<BlockingCertificate>> by_offset;
    std::size_t survived = 0;
    bool exhausted = false;  // bounds hit before the set sequence closed
};

CertificationRun certify_offsets(const CellularAutomaton& ca, const Word& word, std::size_t width, const BlockingBounds& bounds = {});

// Exact re-check of a certificate by rerunning the certification at its offset.
bool verify_blocking(const CellularAutomaton& ca, const BlockingCertificate& cert, const BlockingBounds& bounds = {});

BlockingVerdict check_blocking(const CellularAutomaton& ca, const Word& word, std::size_t width, std::size_t offset,
                               const BlockingBounds& bounds = {});

// All certified (word, offset) pairs with width <= |word| <= max_len, ordered by
// length, then word, then offset.
std::vector<BlockingCertificate> find_blocking_words(const CellularAutomaton& ca, std::size_t width, std::size_t max_len,
                                                     const BlockingBounds& bounds = {});

struct NearMiss {
    Word word;
    std::size_t survived = 0;
};

// Certificates in find_blocking_words order, plus uncertified words ranked by
// how many steps some offset stayed determined (ties keep length-lex order).
struct BlockingScan {
    std::size_t width = 1;
    std::size_t max_len = 0;
    std::vector<BlockingCertificate> certificates;
    std::vector<NearMiss> near_misses;
};

BlockingScan scan_blocking_words(const CellularAutomaton& ca, std::size_t width, std::size_t max_len, const BlockingBounds& bounds = {});

struct KurkaBounds {
    std::size_t max_len = 6;
    BlockingBounds blocking;
    // Largest m+p tried when looking for F^(m+p) = F^m.
    std::size_t max_total = 64;
    // Largest composite rule table (entries) built for that comparison.
    std::size_t table_budget = std::size_t{1} << 20;
};

struct KurkaReport {
    bool has_equicontinuity_points = false;  // sound when true
    std::vector<BlockingCertificate> certificates;
    bool equicontinuous = false;  // exact when true
    std::optional<EventualPeriod> equicontinuity_period;
    std::size_t checked_total = 0;  // all m+p up to this value were ruled out or matched
    bool sensitive_candidate = true;
    std::size_t blocking_width = 1;
};

// Width used for Kurka-style blocking words: max(1, radius).
std::size_t blocking_width(const CellularAutomaton& ca);

// Smallest (m, p) with F^(m+p) = F^m as global maps, searching m+p <= max_total.
struct EquicontinuitySearch {
    std::optional<EventualPeriod> period;
    std::size_t checked_total = 0;
};
EquicontinuitySearch find_eventual_periodicity(const CellularAutomaton& ca, std::size_t max_total, std::size_t table_budget);

// `scan`, when given and matching the bounds, is reused instead of searching again.
KurkaReport classify_kurka(const CellularAutomaton& ca, const KurkaBounds& bounds = {}, const BlockingScan* scan = nullptr);

}  // namespace cadyn
