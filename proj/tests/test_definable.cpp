#include <gtest/gtest.h>

#include "fraisse/fraisse.hpp"
#include "oracles.hpp"

using namespace fraisse;

TEST(DefinableArrow, PureSetsMatchMatchingOracle) {
    for (int a = 1; a <= 3; ++a)
        for (int b = a; b <= 3; ++b)
            for (int z = 1; z <= 3; ++z) {
                const int c = b + z;
                const auto r = definable_arrow(catalog::set(), make::pure_set(c), make::pure_set(a), make::pure_set(b),
                                               make::pure_set(z));
                const auto expected = oracle::set_definable(a, b, c, z);
                EXPECT_TRUE(expected.holds);
                EXPECT_EQ(positive(r.verdict), expected.holds) << a << b << z;
                EXPECT_EQ(r.cases.size(), expected.cases) << a << b << z;
                EXPECT_TRUE(check::definable(catalog::set(), make::pure_set(c), make::pure_set(a), make::pure_set(b),
                                             {make::pure_set(z)}, r));
            }
}

TEST(DefinableArrow, SmallSetsFailExactlyWhenTheOracleSaysSo) {
    for (int c = 1; c <= 4; ++c) {
        const auto r = definable_arrow(catalog::set(), make::pure_set(c), make::pure_set(1), make::pure_set(2),
                                       make::pure_set(1));
        if (c < 2)
            continue;
        EXPECT_EQ(positive(r.verdict), oracle::set_definable(1, 2, c, 1).holds) << c;
        EXPECT_TRUE(check::definable(catalog::set(), make::pure_set(c), make::pure_set(1), make::pure_set(2),
                                     {make::pure_set(1)}, r));
    }
}

TEST(DefinableArrow, CompleteGraphFour) {
    const auto k1 = make::graph(1, {});
    const auto r = definable_arrow(catalog::graph(), make::complete_graph(4), k1, make::complete_graph(2), k1);
    EXPECT_EQ(r.verdict, Verdict::holds);
    // z equal to one of four vertices, or a new vertex with one of 16 neighbourhoods.
    EXPECT_EQ(r.cases.size(), 20U);
    EXPECT_EQ(r.cases.size(), oracle::joint_patterns(catalog::graph(), make::complete_graph(4), k1).size());
    EXPECT_TRUE(check::definable(catalog::graph(), make::complete_graph(4), k1, make::complete_graph(2), {k1}, r));
}

TEST(DefinableArrow, FailureCarriesTheOffendingUnion) {
    const auto k1 = make::graph(1, {});
    const auto r = definable_arrow(catalog::graph(), make::complete_graph(2), k1, make::complete_graph(2), k1);
    ASSERT_EQ(r.verdict, Verdict::fails);
    ASSERT_FALSE(r.cases.empty());
    EXPECT_FALSE(r.cases.back().copy);
    EXPECT_TRUE(check::definable(catalog::graph(), make::complete_graph(2), k1, make::complete_graph(2), {k1}, r));
    auto forged = r;
    forged.verdict = Verdict::holds;
    EXPECT_FALSE(check::definable(catalog::graph(), make::complete_graph(2), k1, make::complete_graph(2), {k1}, forged));
}

TEST(StableArrow, OrdersFailThePrecondition) {
    const auto pt = make::chain(1);
    const auto r = stable_arrow(catalog::linear_order(), make::chain(3), pt, make::chain(2), {pt}, 4);
    EXPECT_EQ(r.verdict, Verdict::precondition_failed);
    ASSERT_FALSE(r.instability.empty());
    EXPECT_TRUE(check::definable(catalog::linear_order(), make::chain(3), pt, make::chain(2), {pt}, r));
}

TEST(StableArrow, SetsPassThePrecondition) {
    const auto r = stable_arrow(catalog::set(), make::pure_set(3), make::pure_set(1), make::pure_set(2),
                                {make::pure_set(1)}, 4);
    EXPECT_EQ(r.verdict, Verdict::holds);
    EXPECT_EQ(r.depth, 4);
}

TEST(Roelcke, FreeJoinIsAWitnessInGraphs) {
    const auto graphs = enumerate_up_to(catalog::graph(), 1, 2);
    for (const auto& a : graphs)
        for (const auto& b : graphs)
            for (const auto& z : graphs) {
                if (!embeds(a, b))
                    continue;
                const auto w = roelcke_witness(catalog::graph(), a, b, z, b.size() + z.size());
                ASSERT_TRUE(w);
                EXPECT_TRUE(check::roelcke(catalog::graph(), a, b, z, *w));
                const auto join = free_join(catalog::graph(), b, z);
                ASSERT_TRUE(join);
                EXPECT_TRUE(is_roelcke_witness(*join, a, b));
            }
}

TEST(Roelcke, OrdersPlaceZOutside) {
    const auto w = roelcke_witness(catalog::linear_order(), make::chain(1), make::chain(2), make::chain(1), 3);
    ASSERT_TRUE(w);
    EXPECT_TRUE(check::roelcke(catalog::linear_order(), make::chain(1), make::chain(2), make::chain(1), *w));
    EXPECT_FALSE(roelcke_witness(catalog::linear_order(), make::chain(1), make::chain(2), make::chain(1), 2));
}
