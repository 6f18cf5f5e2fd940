#include <gtest/gtest.h>

#include <random>

#include "fraisse/fraisse.hpp"
#include "oracles.hpp"

using namespace fraisse;

namespace {

bool oracle_holds(const Structure& c, const Structure& a, const Structure& b, int k) {
    return !oracle::bad_coloring(c, a, b, k).has_value();
}

} // namespace

TEST(ClassicalArrow, OrdersSixAndFive) {
    const auto a = make::chain(2), b = make::chain(3);
    const auto six = classical_arrow(make::chain(6), a, b, 2);
    EXPECT_EQ(six.verdict, Verdict::holds);
    const auto five = classical_arrow(make::chain(5), a, b, 2);
    ASSERT_EQ(five.verdict, Verdict::fails);
    ASSERT_TRUE(five.counterexample);
    EXPECT_TRUE(check::classical_counterexample(make::chain(5), a, b, 2, *five.counterexample));
    std::uint64_t n6 = 0, n5 = 0;
    EXPECT_FALSE(oracle::bad_coloring(make::chain(6), a, b, 2, &n6));
    EXPECT_EQ(n6, 1U << 15);
    EXPECT_TRUE(oracle::bad_coloring(make::chain(5), a, b, 2, &n5));
}

TEST(ClassicalArrow, AgreesWithExhaustiveOnSmallGraphs) {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 25; ++trial) {
        const auto c = oracle::random_graph(5, rng, 0.6);
        const auto a = make::graph(1, {});
        const auto b = trial % 2 ? make::graph(2, {{0, 1}}) : make::graph(3, {{0, 1}, {1, 2}});
        if (embeddings(b, c).empty())
            continue;
        const auto r = classical_arrow(c, a, b, 2);
        EXPECT_EQ(positive(r.verdict), oracle_holds(c, a, b, 2)) << serialize_structure(c);
    }
}

TEST(ClassicalArrow, EdgesIntoTriangles) {
    const auto a = make::graph(2, {{0, 1}});
    const auto b = make::complete_graph(3);
    for (int n = 3; n <= 5; ++n) {
        const auto c = make::complete_graph(n);
        EXPECT_EQ(positive(classical_arrow(c, a, b, 2).verdict), oracle_holds(c, a, b, 2)) << n;
    }
}

TEST(ClassicalArrow, Degenerate) {
    const auto r = classical_arrow(make::path(3), make::complete_graph(2), make::graph(2, {}), 2);
    EXPECT_EQ(r.verdict, Verdict::degenerate_holds);
    const auto none = classical_arrow(make::chain(2), make::chain(1), make::chain(3), 2);
    EXPECT_EQ(none.verdict, Verdict::fails);
    EXPECT_FALSE(none.counterexample);
}

TEST(ClassicalArrow, Monotonicity) {
    std::mt19937 rng(23);
    const auto a = make::chain(1);
    int checked = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const int m = 2 + trial % 2;
        const int n = m + 1 + static_cast<int>(rng() % 3);
        const int k = 2 + trial % 2;
        const auto b = make::chain(m);
        const auto c = make::chain(n);
        const bool holds = positive(classical_arrow(c, a, b, k).verdict);
        if (holds) {
            // Larger C keeps the arrow; fewer colors keep it.
            EXPECT_TRUE(positive(classical_arrow(make::chain(n + 1), a, b, k).verdict));
            EXPECT_TRUE(positive(classical_arrow(c, a, b, k - 1).verdict));
        } else {
            EXPECT_FALSE(positive(classical_arrow(make::chain(n - 1), a, b, k).verdict));
            EXPECT_FALSE(positive(classical_arrow(c, a, b, k + 1).verdict));
        }
        EXPECT_EQ(holds, n >= (m - 1) * k + 1);
        ++checked;
    }
    EXPECT_EQ(checked, 20);
}

TEST(ClassicalArrow, ThreadsGiveTheSameAnswer) {
    const auto a = make::chain(2), b = make::chain(3);
    for (int n : {5, 6}) {
        const auto one = classical_arrow(make::chain(n), a, b, 2, {1, nullptr});
        const auto four = classical_arrow(make::chain(n), a, b, 2, {4, nullptr});
        EXPECT_EQ(one.verdict, four.verdict);
        EXPECT_EQ(one.counterexample.has_value(), four.counterexample.has_value());
        if (one.counterexample)
            EXPECT_EQ(one.counterexample->values(), four.counterexample->values());
    }
}

TEST(ClassicalArrow, BudgetIsEnforced) {
    Budget tiny(10);
    EXPECT_THROW(classical_arrow(make::chain(6), make::chain(2), make::chain(3), 2, {1, &tiny}), ResourceLimit);
}

TEST(ArrowSearch, FindsSixChain) {
    const auto r = arrow_search(catalog::linear_order(), make::chain(2), make::chain(3), 2, 7);
    ASSERT_TRUE(r.found);
    EXPECT_EQ(r.found->size(), 6);
    const auto none = arrow_search(catalog::linear_order(), make::chain(2), make::chain(3), 2, 5);
    EXPECT_FALSE(none.found);
}

TEST(Verify, FirstBadColoringIsIndependentEvidence) {
    EXPECT_FALSE(check::first_bad_coloring(make::chain(6), make::chain(2), make::chain(3), 2));
    const auto bad = check::first_bad_coloring(make::chain(5), make::chain(2), make::chain(3), 2);
    ASSERT_TRUE(bad);
    const Coloring<int> chi(embeddings(make::chain(2), make::chain(5)), *bad);
    EXPECT_TRUE(check::classical_counterexample(make::chain(5), make::chain(2), make::chain(3), 2, chi));
    // Flipping any single color of a bad coloring of the 5-chain creates a monochromatic copy or not;
    // the checker must agree with a direct scan of all copies.
    const auto inner = embeddings(make::chain(2), make::chain(3));
    for (std::size_t i = 0; i < bad->size(); ++i) {
        auto flipped = *bad;
        flipped[i] = 1 - flipped[i];
        const Coloring<int> other(chi.domain(), flipped);
        bool none_mono = true;
        for (const auto& e : embeddings(make::chain(3), make::chain(5)))
            none_mono = none_mono && !is_constant(restrict_along(other, e, inner));
        EXPECT_EQ(check::classical_counterexample(make::chain(5), make::chain(2), make::chain(3), 2, other), none_mono);
    }
}
