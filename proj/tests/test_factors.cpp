#include <gtest/gtest.h>

#include "cadyn/factors.hpp"
#include "oracles.hpp"

using namespace cadyn;

namespace {

CellularAutomaton example2() { return parse_rule(oracle::fixture("example2.rule")); }

// Points of W: a class word on the window followed by random cells.
std::vector<Configuration> random_points(std::mt19937_64& rng, const CellularAutomaton& ca, const PeriodicFactor& f, int count) {
    std::vector<Configuration> out;
    for (int i = 0; i < count; ++i) {
        const Word& c = f.class_words[rng() % f.class_words.size()];
        Word word = c;
        const Word tail = oracle::random_word(rng, ca.k(), 1, 8);
        word.insert(word.end(), tail.begin(), tail.end());
        const Coord n = static_cast<Coord>(word.size());
        out.push_back(Configuration{PeriodicConfig{word, static_cast<std::size_t>(((-f.window.first) % n + n) % n)}});
        EXPECT_EQ(read_window(out.back(), f.window.first, f.window.last), c);
    }
    return out;
}

}  // namespace

TEST(Factors, Example2) {
    const auto ca = example2();
    const Alphabet& a = ca.alphabet();
    const FactorOutcome out = build_periodic_factor(ca, parse_config(a, "^(wr000w)^"), Window{0, 5});
    ASSERT_TRUE(out.factor) << out.failure;
    const PeriodicFactor& f = *out.factor;
    EXPECT_EQ(f.p, 2u);
    EXPECT_EQ(f.m, 2u);
    EXPECT_EQ(f.class_words, (std::vector<Word>{a.parse_word("wr0r0w"), a.parse_word("wrr0rw")}));
    EXPECT_TRUE(verify_factor(ca, f, factor_representatives(f)));
    std::mt19937_64 rng(61);
    EXPECT_TRUE(verify_factor(ca, f, random_points(rng, ca, f, 50)));
}

TEST(Factors, TrivialCases) {
    const auto id = CellularAutomaton::elementary(204);
    const auto f = build_periodic_factor(id, Configuration{PeriodicConfig{{0, 1, 1}, 0}}, Window{-1, 1});
    ASSERT_TRUE(f.factor);
    EXPECT_EQ(f.factor->p, 1u);

    const auto ca = example2();
    const auto wall = build_periodic_factor(ca, parse_config(ca.alphabet(), "^(w000)^"), Window{0, 3});
    ASSERT_TRUE(wall.factor);
    EXPECT_EQ(wall.factor->p, 1u);
    EXPECT_TRUE(verify_factor(ca, *wall.factor, factor_representatives(*wall.factor)));
}

// With p = 2 swapping both residues is a relabelling that still commutes with
// +1, so the tampering merges the two classes instead.
TEST(Factors, TamperedResiduesFail) {
    const auto ca = example2();
    PeriodicFactor f = *build_periodic_factor(ca, parse_config(ca.alphabet(), "^(wr000w)^"), Window{0, 5}).factor;
    f.assignment[f.class_words[1]] = f.assignment[f.class_words[0]];
    EXPECT_FALSE(verify_factor(ca, f, factor_representatives(f)));
}

TEST(Factors, PointOutsideWindowSetThrows) {
    const auto ca = example2();
    const Alphabet& a = ca.alphabet();
    const PeriodicFactor f = *build_periodic_factor(ca, parse_config(a, "^(wr000w)^"), Window{0, 5}).factor;
    EXPECT_THROW(verify_factor(ca, f, {parse_config(a, "^(0)^")}), FactorError);
}

// Column periods of nested windows divide each other.
TEST(Factors, NestedWindows) {
    std::mt19937_64 rng(62);
    int checked = 0;
    for (int i = 0; i < 80; ++i) {
        const auto ca = oracle::random_rule(rng, 2 + rng() % 2, -1, static_cast<int>(rng() % 2));
        const Configuration x{PeriodicConfig{oracle::random_word(rng, ca.k(), 1, 7), 0}};
        const auto inner = build_periodic_factor(ca, x, Window{0, 0});
        const auto outer = build_periodic_factor(ca, x, Window{-2, 3});
        if (!inner.factor || !outer.factor) continue;
        ++checked;
        ASSERT_EQ(outer.column_period % inner.column_period, 0u);
    }
    EXPECT_GT(checked, 40);
}

// Without a shielding word the window set is not forward invariant: under the
// right shift a free cell enters the window and the image leaves W.
TEST(Factors, UnshieldedWindowIsRejected) {
    const auto shift = parse_rule("alphabet: a b\nneighborhood: -1 0\ntable: a* -> a; b* -> b");
    const auto out = build_periodic_factor(shift, parse_config(shift.alphabet(), "^(aabb)^"), Window{-2, 3});
    ASSERT_TRUE(out.factor);
    EXPECT_EQ(out.factor->p, 4u);
    EXPECT_FALSE(verify_factor(shift, *out.factor, factor_representatives(*out.factor)));
}
