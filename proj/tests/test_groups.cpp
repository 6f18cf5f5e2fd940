#include <gtest/gtest.h>

#include <random>

#include "fraisse/fraisse.hpp"
#include "oracles.hpp"

using namespace fraisse;

TEST(Automorphisms, MatchAllPermutations) {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = oracle::random_graph(5, rng, 0.3 + 0.1 * (trial % 4));
        auto got = automorphisms(s).elements;
        std::sort(got.begin(), got.end());
        EXPECT_EQ(got, oracle::all_automorphisms(s));
    }
    EXPECT_EQ(automorphisms(make::cycle(5)).elements.size(), 10U);
    EXPECT_EQ(automorphisms(make::chain(5)).elements.size(), 1U);
}

TEST(Orbits, MatchBruteForceClosure) {
    const auto c = make::cycle(6);
    const auto a = make::graph(2, {});
    const auto p = orbits_on_embeddings(c, a);
    // Two embeddings share an orbit iff some automorphism maps one onto the other.
    const auto group = oracle::all_automorphisms(c);
    std::vector<int> block_of(p.base.size(), -1);
    for (std::size_t b = 0; b < p.blocks.size(); ++b)
        for (int i : p.blocks[b])
            block_of[static_cast<std::size_t>(i)] = static_cast<int>(b);
    for (std::size_t i = 0; i < p.base.size(); ++i)
        for (std::size_t j = 0; j < p.base.size(); ++j) {
            bool related = false;
            for (const auto& g : group) {
                VertexMap img;
                for (Vertex v : p.base[i].map)
                    img.push_back(g[static_cast<std::size_t>(v)]);
                related = related || img == p.base[j].map;
            }
            EXPECT_EQ(related, block_of[i] == block_of[j]);
        }
}

TEST(InvariantPartitions, RigidHostGivesAllPartitions) {
    // The 3-chain is rigid, so every partition of its three points is invariant: Bell(3) = 5.
    const auto ps = invariant_partitions(make::chain(3), make::chain(1), 3, 100);
    EXPECT_EQ(ps.size(), 5U);
    const auto group = automorphisms(make::chain(3));
    for (const auto& p : ps)
        EXPECT_TRUE(is_invariant(p, group));
}

TEST(InvariantPartitions, TransitiveHostHasOnlyTheTrivialOne) {
    const auto ps = invariant_partitions(make::complete_graph(4), make::graph(1, {}), 4, 100);
    ASSERT_EQ(ps.size(), 1U);
    EXPECT_EQ(ps.front().blocks.size(), 1U);
}

TEST(CoherentPartitions, ChainMustBeIncreasing) {
    EXPECT_THROW(check_chain(catalog::linear_order(), {make::chain(3), make::chain(2)}), InputError);
    const auto r = coherent_partitions(catalog::linear_order(), {make::chain(2), make::chain(3)}, make::chain(1), 2, 100);
    EXPECT_FALSE(r.families.empty());
    EXPECT_FALSE(r.only_trivial);
    const auto k = coherent_partitions(catalog::graph(), {make::complete_graph(2), make::complete_graph(3)},
                                       make::graph(1, {}), 2, 100);
    EXPECT_TRUE(k.only_trivial);
}

TEST(Proximal, LeastPointIndicatorOnFourChain) {
    const auto u = make::chain(4);
    const auto a = make::chain(1);
    const Coloring<double> chi(embeddings(a, u), {1.0, 0.0, 0.0, 0.0});
    const auto r = proximal_check(catalog::linear_order(), u, a, chi, 3);
    ASSERT_EQ(r.entries.size(), 3U);
    for (const auto& e : r.entries) {
        EXPECT_EQ(e.status, ProximalStatus::pass);
        EXPECT_TRUE(check::proximal(u, a, chi, e));
    }
    const auto arrow = proximal_arrow(catalog::linear_order(), u, a, chi, make::chain(2), 3);
    ASSERT_TRUE(arrow.copy);
    EXPECT_TRUE(is_constant(restrict_along(chi, *arrow.copy, embeddings(a, make::chain(2)))));
}

TEST(Proximal, UniverseTooSmallRefusesTheArrow) {
    const auto u = make::chain(2);
    const auto a = make::chain(1);
    const Coloring<double> chi(embeddings(a, u), {0.0, 1.0});
    const auto r = proximal_check(catalog::linear_order(), u, a, chi, 3);
    EXPECT_EQ(r.entries.back().status, ProximalStatus::universe_too_small);
    EXPECT_TRUE(check::proximal(u, a, chi, r.entries.back()));
    EXPECT_THROW(proximal_arrow(catalog::linear_order(), u, a, chi, make::chain(2), 3), PreconditionError);
}

TEST(Proximal, FailuresAreConfirmedOverAllSubsets) {
    const auto u = make::pure_set(3);
    const auto a = make::pure_set(1);
    const Coloring<double> chi(embeddings(a, u), {0.0, 0.5, 1.0});
    const auto r = proximal_check(catalog::set(), u, a, chi, 2);
    for (const auto& e : r.entries)
        EXPECT_TRUE(check::proximal(u, a, chi, e));
}

TEST(Coloring, ParseAndSerialize) {
    const auto u = make::chain(3);
    const auto a = make::chain(1);
    const auto chi = parse_coloring("# values\n(2) 0.5\n(0) 1\n(1) 0\n", a, u);
    EXPECT_DOUBLE_EQ(chi(VertexMap{0}), 1.0);
    EXPECT_EQ(serialize_coloring(parse_coloring(serialize_coloring(chi), a, u)), serialize_coloring(chi));
    EXPECT_THROW(parse_coloring("(0) 1\n", a, u), InputError);
}
