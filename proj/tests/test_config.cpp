#include <gtest/gtest.h>

#include "cadyn/config.hpp"
#include "cadyn/stp.hpp"
#include "oracles.hpp"

using namespace cadyn;

namespace {

CellularAutomaton example2() { return parse_rule(oracle::fixture("example2.rule")); }

TwoSidedConfig random_two_sided(std::mt19937_64& rng, std::size_t k) {
    TwoSidedConfig t;
    t.left = oracle::random_word(rng, k, 1, 4);
    t.center = oracle::random_word(rng, k, 0, 6);
    t.right = oracle::random_word(rng, k, 1, 4);
    t.anchor = static_cast<Coord>(rng() % 41) - 20;
    return t;
}

}  // namespace

TEST(Config, ReadAt) {
    EXPECT_EQ(read_at(PeriodicConfig{{0, 1}, 0}, 5), 1);
    EXPECT_EQ(read_at(PeriodicConfig{{0, 1}, 0}, -3), 1);
    const TwoSidedConfig constant{{0}, {}, {0}, 17};
    for (Coord i = -5; i <= 5; ++i) EXPECT_EQ(read_at(constant, i), 0);

    const auto ca = example2();
    const Alphabet& a = ca.alphabet();
    const TwoSidedConfig y = y_prime(a.parse_word("w"), a.parse_word("00"), a.parse_word("r0"));
    EXPECT_EQ(read_at(y, 0), a.index("w"));
    EXPECT_EQ(read_window(Configuration{y}, -6, 8), a.parse_word("wr0wr0w00w00w00"));
}

TEST(Config, StepPeriodic) {
    const auto ca = example2();
    const Alphabet& a = ca.alphabet();
    const PeriodicConfig x{a.parse_word("wr000w"), 0};
    EXPECT_TRUE(equals(step(ca, x), PeriodicConfig{a.parse_word("wrr00w"), 0}));
    const auto id = CellularAutomaton::elementary(204);
    const PeriodicConfig z{{0, 1, 1}, 2};
    EXPECT_TRUE(equals(step(id, z), z));
    EXPECT_TRUE(equals(step(CellularAutomaton::elementary(90), PeriodicConfig{{0}, 0}), PeriodicConfig{{0}, 0}));
}

TEST(Config, StepTwoSidedKeepsWallBlock) {
    const auto ca = example2();
    const Alphabet& a = ca.alphabet();
    const TwoSidedConfig x = from_layout(a.parse_word("wr0"), a.parse_word("w00w"), a.parse_word("00w"), 0);
    const TwoSidedConfig fx = step(ca, x);
    EXPECT_EQ(read_window(Configuration{fx}, 0, 3), a.parse_word("w00w"));
    const auto rows = oracle::simulate(ca, oracle::cells_of(x), -30, 30, 1);
    EXPECT_EQ(read_window(Configuration{fx}, -30, 30), rows[1]);
}

TEST(Config, ShiftRuleIsShift) {
    const auto shift = CellularAutomaton::elementary(170);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        const TwoSidedConfig c = random_two_sided(rng, 2);
        EXPECT_TRUE(equals(step(shift, c), shift_by(c, 1)));
    }
}

TEST(Config, ShiftBy) {
    const PeriodicConfig p{{0, 1}, 0};
    EXPECT_TRUE(equals(shift_by(p, 0), p));
    EXPECT_EQ(shift_by(p, 1).phase, 1u);
    std::mt19937_64 rng(4);
    for (int i = 0; i < 200; ++i) {
        const TwoSidedConfig c = random_two_sided(rng, 3);
        EXPECT_TRUE(equals(shift_by(shift_by(c, 3), -3), c));
        const auto s = shift_by(c, 5);
        for (Coord j = -30; j <= 30; ++j) ASSERT_EQ(read_at(s, j), read_at(c, j + 5));
    }
}

TEST(Config, Canonicalize) {
    const TwoSidedConfig c = canonicalize(TwoSidedConfig{{0, 1, 0, 1}, {}, {1, 1, 0}, 0});
    EXPECT_EQ(c.left.size(), 2u);
    // A center that repeats the right tail is absorbed; the tails still differ.
    const TwoSidedConfig absorbed = canonicalize(TwoSidedConfig{{0}, {0, 1}, {0, 1}, 0});
    EXPECT_TRUE(absorbed.center.empty());
    EXPECT_FALSE(is_spatially_periodic(absorbed).has_value());
}

// With |wv| = |wu| the limit point is (wv)^inf (wu)^inf, so canonicalization
// leaves no center at all; non-periodicity shows up as distinct tails.
TEST(Config, LimitPointCanonicalForm) {
    const auto ca = example2();
    const Alphabet& a = ca.alphabet();
    const TwoSidedConfig y = canonicalize(y_prime(a.parse_word("w"), a.parse_word("00"), a.parse_word("r0")));
    EXPECT_TRUE(y.center.empty());
    EXPECT_NE(y.left, y.right);
    EXPECT_FALSE(is_spatially_periodic(y).has_value());
    const auto cells = oracle::cells_of(y);
    for (Coord i = -12; i < 0; ++i) EXPECT_EQ(cells(i), a.parse_word("wr0")[static_cast<std::size_t>((i % 3 + 3) % 3)]);
    for (Coord i = 0; i < 12; ++i) EXPECT_EQ(cells(i), a.parse_word("w00")[static_cast<std::size_t>(i % 3)]);
}

TEST(Config, SpatialPeriodicity) {
    EXPECT_TRUE(is_spatially_periodic(canonicalize(TwoSidedConfig{{0, 1}, {}, {0, 1}, 4})).has_value());
    std::mt19937_64 rng(8);
    for (int i = 0; i < 100; ++i) {
        const PeriodicConfig p{oracle::random_word(rng, 3, 1, 6), 0};
        const auto back = is_spatially_periodic(embed(p));
        ASSERT_TRUE(back.has_value());
        EXPECT_TRUE(equals(*back, p));
    }
}

TEST(Config, Equality) {
    const PeriodicConfig ab{{0, 1}, 0}, abab{{0, 1, 0, 1}, 2};
    EXPECT_TRUE(equals(ab, ab));
    EXPECT_TRUE(equals(ab, abab));
    EXPECT_FALSE(equals(ab, PeriodicConfig{{0, 1}, 1}));
    const TwoSidedConfig c{{0}, {1}, {0}, 0};
    EXPECT_FALSE(equals(shift_by(c, 1), c));
}

TEST(Config, CanonicalFormsAgreeWithCells) {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 300; ++i) {
        const TwoSidedConfig raw = random_two_sided(rng, 2);
        const TwoSidedConfig c = canonicalize(raw);
        ASSERT_EQ(canonicalize(c), c);
        ASSERT_TRUE(oracle::agree_on(oracle::cells_of(raw), oracle::cells_of(c), -60, 60));
        const TwoSidedConfig other = random_two_sided(rng, 2);
        const bool same_cells = oracle::agree_on(oracle::cells_of(raw), oracle::cells_of(other), -80, 80);
        ASSERT_EQ(equals(raw, other), same_cells);
    }
}

TEST(Config, StepMatchesOracleAndEmbedding) {
    std::mt19937_64 rng(10);
    for (int i = 0; i < 200; ++i) {
        const int left = -static_cast<int>(rng() % 3), right = static_cast<int>(rng() % 3);
        const auto ca = oracle::random_rule(rng, 2 + rng() % 2, left, right);
        const TwoSidedConfig c = random_two_sided(rng, ca.k());
        const auto rows = oracle::simulate(ca, oracle::cells_of(c), -40, 40, 1);
        ASSERT_EQ(read_window(Configuration{step(ca, c)}, -40, 40), rows[1]);

        const PeriodicConfig p{oracle::random_word(rng, ca.k(), 1, 7), rng() % 7};
        const PeriodicConfig q{p.word, p.phase % p.word.size()};
        ASSERT_TRUE(equals(embed(step(ca, q)), step(ca, embed(q))));
    }
}

TEST(Config, Literals) {
    const auto ca = example2();
    const Alphabet& a = ca.alphabet();
    const Configuration p = parse_config(a, "^(wr000w)^@2");
    EXPECT_EQ(read_at(p, 0), a.index("0"));
    const Configuration t = parse_config(a, "^(wr0)^ w00w ^(00w)^ @0");
    EXPECT_EQ(read_window(t, -3, 6), a.parse_word("wr0w00w00w"));
    for (const Configuration& c : {p, t}) EXPECT_TRUE(equals(parse_config(a, format_config(a, c)), c));
    EXPECT_THROW(parse_config(a, "^(wx)^"), RuleError);
    EXPECT_THROW(parse_config(a, "(wr)"), RuleError);
}

TEST(Config, CenterCap) {
    // Rule 90 from a single 1 grows its center by two cells per step.
    const auto r90 = CellularAutomaton::elementary(90);
    TwoSidedConfig x{{0}, {1}, {0}, 0};
    EXPECT_THROW(
        {
            for (int t = 0; t < 100; ++t) x = step(r90, x, 16);
        },
        BudgetExceeded);
}
