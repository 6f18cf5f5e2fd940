#include <gtest/gtest.h>

#include "fraisse/fraisse.hpp"
#include "oracles.hpp"

using namespace fraisse;

TEST(Patterns, SmallCounts) {
    EXPECT_EQ(pattern_count(catalog::graph(), make::graph(1, {}), make::graph(1, {})), 3U);
    EXPECT_EQ(pattern_count(catalog::linear_order(), make::chain(1), make::chain(1)), 3U);
    EXPECT_EQ(pattern_count(catalog::set(), make::pure_set(1), make::pure_set(1)), 2U);
}

TEST(Patterns, PureSetClosedForm) {
    for (int m = 1; m <= 3; ++m)
        for (int k = 1; k <= 3; ++k)
            EXPECT_EQ(pattern_count(catalog::set(), make::pure_set(m), make::pure_set(k)), oracle::set_pattern_count(m, k))
                << m << "," << k;
}

TEST(Patterns, MatchMarkedStructureEnumeration) {
    struct Case {
        AgeSpec spec;
        Structure a, z;
    };
    const std::vector<Case> cases{
        {catalog::graph(), make::graph(2, {{0, 1}}), make::graph(1, {})},
        {catalog::graph(), make::graph(2, {}), make::graph(2, {{0, 1}})},
        {catalog::linear_order(), make::chain(2), make::chain(2)},
        {catalog::linear_order(), make::chain(2), make::chain(1)},
        {catalog::set(), make::pure_set(2), make::pure_set(3)},
        {catalog::graph_kfree(3), make::graph(2, {{0, 1}}), make::graph(1, {})},
        {catalog::tournament(), oracle::labelled(catalog::tournament(), 2).front(), oracle::labelled(catalog::tournament(), 1).front()},
    };
    for (const auto& c : cases)
        EXPECT_EQ(pattern_count(c.spec, c.a, c.z), oracle::joint_patterns(c.spec, c.a, c.z).size());
}

TEST(Patterns, WitnessesAreUnionSupportedJointEmbeddings) {
    const auto a = make::chain(2);
    const auto z = make::chain(2);
    for (const auto& e : joint_embeddings(catalog::linear_order(), a, {z})) {
        EXPECT_TRUE(check::joint_embedding(catalog::linear_order(), e.witness, {&a, &z}));
        EXPECT_EQ(pattern_of(e.witness), e.code);
    }
}

TEST(Patterns, RelabelingTheHostKeepsThePattern) {
    const auto host = make::cycle(5);
    const Embedding a{{0, 1}};
    const Embedding z{{3}};
    const auto code = pattern_in(host, a, z);
    VertexMap perm{4, 2, 0, 1, 3};
    const auto moved = relabel(host, perm);
    auto push = [&](const Embedding& e) {
        Embedding out;
        for (Vertex v : e.map)
            out.map.push_back(perm[static_cast<std::size_t>(v)]);
        return out;
    };
    EXPECT_EQ(pattern_in(moved, push(a), push(z)), code);
}

TEST(Patterns, FirstUnionIsTheFreeJoin) {
    const auto b = make::graph(2, {{0, 1}});
    const auto z = make::graph(1, {});
    std::optional<Structure> first;
    for_each_union(catalog::graph(), std::vector<Structure>{b, z}, [&](const Structure& host, const std::vector<Embedding>&) {
        first = host;
        return false;
    });
    ASSERT_TRUE(first);
    const auto join = free_join(catalog::graph(), b, z);
    ASSERT_TRUE(join);
    EXPECT_EQ(serialize_structure(*first), serialize_structure(join->host));
}
