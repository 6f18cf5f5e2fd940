#include <gtest/gtest.h>

#include "fraisse/fraisse.hpp"
#include "oracles.hpp"

using namespace fraisse;

namespace {

// z_j at 2j and a_i at 2i+1 in a chain of 2d points: a_i < z_j exactly when i < j.
UnstableWitness interleaving(int depth) {
    UnstableWitness w;
    w.depth = depth;
    w.host = make::chain(2 * depth);
    for (int m = 0; m < depth; ++m) {
        w.a_parts.push_back(Embedding{{2 * m + 1}});
        w.z_parts.push_back(Embedding{{2 * m}});
    }
    w.tau_lt = pattern_in(w.host, w.a_parts[0], w.z_parts[1]);
    w.tau_gt = pattern_in(w.host, w.a_parts[1], w.z_parts[0]);
    return w;
}

// Half-graph: a_i adjacent to z_j exactly when i < j, no other edges.
UnstableWitness half_graph(int depth) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < depth; ++i)
        for (int j = i + 1; j < depth; ++j)
            edges.emplace_back(i, depth + j);
    UnstableWitness w;
    w.depth = depth;
    w.host = make::graph(2 * depth, edges);
    for (int m = 0; m < depth; ++m) {
        w.a_parts.push_back(Embedding{{m}});
        w.z_parts.push_back(Embedding{{depth + m}});
    }
    w.tau_lt = pattern_in(w.host, w.a_parts[0], w.z_parts[1]);
    w.tau_gt = pattern_in(w.host, w.a_parts[1], w.z_parts[0]);
    return w;
}

// Pattern replay through the brute-force marked canonical form.
bool oracle_unstable(const UnstableWitness& w) {
    auto pat = [&](int i, int j) {
        return oracle::marked_pattern(w.host, {w.a_parts[static_cast<std::size_t>(i)].map, w.z_parts[static_cast<std::size_t>(j)].map});
    };
    const auto lt = pat(0, 1);
    const auto gt = pat(1, 0);
    if (lt == gt)
        return false;
    for (int i = 0; i < w.depth; ++i)
        for (int j = 0; j < w.depth; ++j)
            if (i != j && pat(i, j) != (i < j ? lt : gt))
                return false;
    return true;
}

} // namespace

TEST(Stability, ExplicitConstructionsVerify) {
    for (int d = 2; d <= 6; ++d) {
        EXPECT_TRUE(verify_unstable_witness(catalog::linear_order(), make::chain(1), make::chain(1), interleaving(d)));
        EXPECT_TRUE(verify_unstable_witness(catalog::graph(), make::graph(1, {}), make::graph(1, {}), half_graph(d)));
    }
}

TEST(Stability, TamperedWitnessIsRejected) {
    auto w = half_graph(4);
    std::swap(w.z_parts[1], w.z_parts[2]);
    EXPECT_FALSE(verify_unstable_witness(catalog::graph(), make::graph(1, {}), make::graph(1, {}), w));
    auto same = interleaving(3);
    same.tau_gt = same.tau_lt;
    EXPECT_FALSE(verify_unstable_witness(catalog::linear_order(), make::chain(1), make::chain(1), same));
}

TEST(Stability, FindsDepthSixInOrdersAndGraphs) {
    for (const auto& [spec, pt] : std::vector<std::pair<AgeSpec, Structure>>{{catalog::linear_order(), make::chain(1)},
                                                                            {catalog::graph(), make::graph(1, {})}}) {
        const auto r = stability_search(spec, pt, pt, 6);
        ASSERT_TRUE(r.witness) << spec.name();
        EXPECT_FALSE(r.stable);
        EXPECT_TRUE(verify_unstable_witness(spec, pt, pt, *r.witness));
        EXPECT_TRUE(oracle_unstable(*r.witness));
        for (int d = 2; d <= 5; ++d) {
            const auto t = truncate_witness(*r.witness, d);
            EXPECT_TRUE(verify_unstable_witness(spec, pt, pt, t));
            EXPECT_TRUE(oracle_unstable(t));
        }
    }
}

TEST(Stability, PureSetsAreStableAtDepthFour) {
    EXPECT_TRUE(stable_up_to(catalog::set(), make::pure_set(1), make::pure_set(1), 4));
    EXPECT_TRUE(stable_up_to(catalog::set(), make::pure_set(2), make::pure_set(1), 4));
}

TEST(Stability, EqualityLadderHasDepthThree) {
    // x = y realises a ladder of length 3 but not 4.
    const auto r = stability_search(catalog::set(), make::pure_set(1), make::pure_set(1), 3);
    ASSERT_TRUE(r.witness);
    EXPECT_TRUE(oracle_unstable(*r.witness));
}

TEST(Stability, RejectsBadInput) {
    EXPECT_THROW(stability_search(catalog::set(), make::pure_set(1), make::pure_set(1), 1), InputError);
    EXPECT_THROW(stability_search(catalog::graph_kfree(3), make::complete_graph(3), make::graph(1, {}), 3), InputError);
    EXPECT_THROW(truncate_witness(interleaving(3), 4), InputError);
}
