#include <gtest/gtest.h>

#include "cadyn/equicontinuity.hpp"
#include "oracles.hpp"

using namespace cadyn;

namespace {

CellularAutomaton example2() { return parse_rule(oracle::fixture("example2.rule")); }

// Random finite context around `word` (at coordinates [0, |word|)) with random
// constant backgrounds beyond it.
oracle::Cells random_context(std::mt19937_64& rng, std::size_t k, const Word& word, std::size_t reach) {
    const Word left = oracle::random_word(rng, k, reach, reach);
    const Word right = oracle::random_word(rng, k, reach, reach);
    const Letter lb = static_cast<Letter>(rng() % k), rb = static_cast<Letter>(rng() % k);
    return [=](Coord i) -> Letter {
        const Coord n = static_cast<Coord>(word.size()), r = static_cast<Coord>(reach);
        if (i >= 0 && i < n) return word[static_cast<std::size_t>(i)];
        if (i < 0) return i >= -r ? left[static_cast<std::size_t>(i + r)] : lb;
        return i < n + r ? right[static_cast<std::size_t>(i - n)] : rb;
    };
}

void expect_sound(const CellularAutomaton& ca, const BlockingCertificate& cert, int contexts, std::size_t depth, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const Coord first = static_cast<Coord>(cert.offset), last = first + static_cast<Coord>(cert.width) - 1;
    for (int i = 0; i < contexts; ++i) {
        const auto rows = oracle::simulate(ca, random_context(rng, ca.k(), cert.word, depth * static_cast<std::size_t>(ca.radius()) + 2), first,
                                           last, depth);
        for (std::size_t t = 0; t <= depth; ++t) ASSERT_EQ(rows[t], cert.row(t)) << "t=" << t;
    }
}

}  // namespace

TEST(Blocking, WallLetterIsCertified) {
    const auto ca = example2();
    const Word w = ca.alphabet().parse_word("w");
    const BlockingVerdict v = check_blocking(ca, w, 1, 0);
    ASSERT_EQ(v.kind, VerdictKind::Certified);
    EXPECT_EQ(v.certificate->rows, std::vector<Word>{w});
    EXPECT_EQ(v.certificate->period, (EventualPeriod{0, 1}));
    EXPECT_TRUE(verify_blocking(ca, *v.certificate));
}

TEST(Blocking, ShiftIsFalsified) {
    const auto shift = CellularAutomaton::elementary(170);
    for (const Word& w : {Word{0}, Word{1, 0}, Word{0, 1, 1}}) {
        const BlockingVerdict v = check_blocking(shift, w, 1, 0);
        ASSERT_EQ(v.kind, VerdictKind::Falsified);
        const Falsification& f = *v.falsification;
        const auto a = oracle::simulate(shift, oracle::cells_of(f.first.around(w)), 0, 0, f.time);
        const auto b = oracle::simulate(shift, oracle::cells_of(f.second.around(w)), 0, 0, f.time);
        for (std::size_t t = 0; t < f.time; ++t) EXPECT_EQ(a[t], b[t]);
        EXPECT_NE(a[f.time], b[f.time]);
    }
}

TEST(Blocking, FalsificationReplays) {
    std::mt19937_64 rng(41);
    int falsified = 0;
    for (int i = 0; i < 60; ++i) {
        const auto ca = oracle::random_rule(rng, 2, -1, 1);
        const Word w = oracle::random_word(rng, 2, 1, 4);
        const std::size_t p = rng() % w.size();
        const BlockingVerdict v = check_blocking(ca, w, 1, p);
        if (v.kind != VerdictKind::Falsified) continue;
        ++falsified;
        const Falsification& f = *v.falsification;
        const auto a = oracle::simulate(ca, oracle::cells_of(f.first.around(w)), Coord(p), Coord(p), f.time);
        const auto b = oracle::simulate(ca, oracle::cells_of(f.second.around(w)), Coord(p), Coord(p), f.time);
        for (std::size_t t = 0; t < f.time; ++t) ASSERT_EQ(a[t], b[t]);
        ASSERT_NE(a[f.time], b[f.time]);
    }
    EXPECT_GT(falsified, 0);
}

TEST(Blocking, Rule30HasNoShortBlockingWords) {
    EXPECT_TRUE(find_blocking_words(CellularAutomaton::elementary(30), 1, 8).empty());
}

TEST(Blocking, FindBlockingWords) {
    const auto ca = example2();
    const auto found = find_blocking_words(ca, 1, 1);
    ASSERT_EQ(found.size(), 1u);
    EXPECT_EQ(found[0].word, ca.alphabet().parse_word("w"));
    EXPECT_EQ(found[0].offset, 0u);

    const auto id = find_blocking_words(CellularAutomaton::elementary(204), 1, 1);
    ASSERT_EQ(id.size(), 2u);
    EXPECT_EQ(id[0].word, Word{0});
    EXPECT_EQ(id[1].word, Word{1});

    const auto ex1 = parse_rule(oracle::fixture("example1.rule"));
    EXPECT_TRUE(find_blocking_words(ex1, 1, 6).empty());
}

TEST(Blocking, OrderIsLengthThenLexThenOffset) {
    const auto found = find_blocking_words(example2(), 1, 3);
    for (std::size_t i = 1; i < found.size(); ++i) {
        const auto& a = found[i - 1];
        const auto& b = found[i];
        const auto key = [](const BlockingCertificate& c) { return std::make_tuple(c.word.size(), c.word, c.offset); };
        ASSERT_LT(key(a), key(b));
    }
}

TEST(Blocking, CertificatesAreSound) {
    const auto ca = example2();
    for (const auto& cert : find_blocking_words(ca, 1, 3)) expect_sound(ca, cert, 100, 40, 42);
    std::mt19937_64 rng(43);
    int certified = 0;
    for (int i = 0; i < 300 && certified < 20; ++i) {
        const int right = static_cast<int>(rng() % 2);
        const auto r = oracle::random_rule(rng, 2 + rng() % 2, -1, right);
        for (const auto& cert : find_blocking_words(r, blocking_width(r), 3)) {
            expect_sound(r, cert, 30, 24, rng());
            ++certified;
        }
    }
    EXPECT_GT(certified, 0);
}

TEST(Blocking, NarrowerWindowsStayCertified) {
    const auto ca = example2();
    for (const auto& cert : find_blocking_words(ca, 2, 4)) {
        const CertificationRun narrow = certify_offsets(ca, cert.word, 1);
        for (std::size_t p = cert.offset; p < cert.offset + cert.width; ++p) EXPECT_TRUE(narrow.by_offset[p].has_value());
    }
}

TEST(Blocking, TamperedCertificateIsRejected) {
    const auto ca = example2();
    auto cert = find_blocking_words(ca, 1, 1).at(0);
    cert.rows[0] = ca.alphabet().parse_word("0");
    EXPECT_FALSE(verify_blocking(ca, cert));
}

TEST(Kurka, Classifications) {
    const KurkaReport id = classify_kurka(CellularAutomaton::elementary(204));
    EXPECT_TRUE(id.equicontinuous);
    EXPECT_EQ(id.equicontinuity_period, (EventualPeriod{0, 1}));

    const KurkaReport ex2 = classify_kurka(example2());
    EXPECT_TRUE(ex2.has_equicontinuity_points);
    EXPECT_FALSE(ex2.equicontinuous);
    EXPECT_FALSE(ex2.sensitive_candidate);

    const KurkaReport r30 = classify_kurka(CellularAutomaton::elementary(30));
    EXPECT_TRUE(r30.sensitive_candidate);
    EXPECT_FALSE(r30.has_equicontinuity_points);

    EXPECT_EQ(classify_kurka(CellularAutomaton::elementary(0)).equicontinuity_period, (EventualPeriod{1, 1}));
    EXPECT_EQ(classify_kurka(CellularAutomaton::elementary(51)).equicontinuity_period, (EventualPeriod{0, 2}));
    EXPECT_FALSE(classify_kurka(CellularAutomaton::elementary(170)).equicontinuous);
}

// A lone r keeps moving right through 0s, so no finite power of the map repeats.
TEST(Kurka, Example2TravellingParticle) {
    const auto ca = example2();
    const Alphabet& a = ca.alphabet();
    TwoSidedConfig x = from_layout(a.parse_word("0"), a.parse_word("r"), a.parse_word("0"), 0);
    for (Coord t = 1; t <= 20; ++t) {
        x = step(ca, x);
        EXPECT_EQ(read_at(x, t), a.index("r"));
    }
}

TEST(Kurka, EventualPeriodsAreExact) {
    std::mt19937_64 rng(44);
    for (int i = 0; i < 100; ++i) {
        const auto ca = oracle::random_rule(rng, 2, -1, static_cast<int>(rng() % 2));
        const auto found = find_eventual_periodicity(ca, 16, 1 << 16);
        if (!found.period) continue;
        for (int j = 0; j < 20; ++j) {
            const Word w = oracle::random_word(rng, 2, 1, 9);
            PeriodicConfig a{w, 0}, b{w, 0};
            for (std::size_t t = 0; t < found.period->preperiod; ++t) a = step(ca, a);
            for (std::size_t t = 0; t < found.period->preperiod + found.period->period; ++t) b = step(ca, b);
            ASSERT_TRUE(equals(a, b));
        }
    }
}

TEST(Kurka, CoherentWithBlockingSearch) {
    std::mt19937_64 rng(45);
    for (int i = 0; i < 40; ++i) {
        const auto ca = oracle::random_rule(rng, 2, -1, 1);
        KurkaBounds b;
        b.max_len = 4;
        b.max_total = 8;
        const KurkaReport r = classify_kurka(ca, b);
        ASSERT_EQ(r.has_equicontinuity_points, !find_blocking_words(ca, blocking_width(ca), 4).empty());
    }
}
