#include <gtest/gtest.h>

#include "fraisse/fraisse.hpp"
#include "oracles.hpp"

using namespace fraisse;

TEST(Lp, SmallProgramAndDuality) {
    // min -x - y  s.t.  x + 2y <= 4, 3x + y <= 6, x, y >= 0  ->  optimum at (1.6, 1.2), value -2.8.
    lp::Program p;
    p.objective = {-1.0, -1.0};
    p.rows.push_back({{1.0, 2.0}, lp::Sense::le, 4.0});
    p.rows.push_back({{3.0, 1.0}, lp::Sense::le, 6.0});
    const auto s = lp::solve(p);
    ASSERT_EQ(s.status, lp::Status::optimal);
    EXPECT_NEAR(s.value, -2.8, 1e-9);
    EXPECT_NEAR(s.x[0], 1.6, 1e-9);
    EXPECT_NEAR(s.x[1], 1.2, 1e-9);
    EXPECT_LT(lp::duality_gap(p, s), 1e-9);
}

TEST(Lp, InfeasibleAndUnbounded) {
    lp::Program bad;
    bad.objective = {1.0};
    bad.rows.push_back({{1.0}, lp::Sense::ge, 2.0});
    bad.rows.push_back({{1.0}, lp::Sense::le, 1.0});
    EXPECT_EQ(lp::solve(bad).status, lp::Status::infeasible);
    lp::Program open;
    open.objective = {-1.0};
    open.rows.push_back({{1.0}, lp::Sense::ge, 0.0});
    EXPECT_EQ(lp::solve(open).status, lp::Status::unbounded);
}

TEST(ConvexArrow, FourSetMatchesExhaustiveMinimax) {
    const auto r = convex_arrow(make::pure_set(4), make::pure_set(1), make::pure_set(2), 0.5);
    ASSERT_TRUE(r.value);
    EXPECT_NEAR(*r.value, oracle::two_point_minimax(make::pure_set(4), make::pure_set(1), make::pure_set(2)), 1e-6);
    EXPECT_EQ(r.verdict, Verdict::holds);
    EXPECT_EQ(r.colorings, 8U);
    EXPECT_LE(r.max_gap, kGapTolerance);
    EXPECT_TRUE(check::convex(make::pure_set(4), make::pure_set(1), make::pure_set(2), r));
}

TEST(ConvexArrow, TwoPointInstancesMatchMinimax) {
    struct Case {
        Structure c, a, b;
    };
    const std::vector<Case> cases{
        {make::chain(2), make::chain(1), make::chain(2)},
        {make::chain(3), make::chain(1), make::chain(2)},
        {make::chain(4), make::chain(1), make::chain(2)},
        {make::pure_set(2), make::pure_set(1), make::pure_set(2)},
        {make::pure_set(3), make::pure_set(1), make::pure_set(2)},
        {make::path(3), make::graph(1, {}), make::complete_graph(2)},
        {make::cycle(4), make::graph(1, {}), make::complete_graph(2)},
    };
    for (const auto& c : cases) {
        const auto r = convex_arrow(c.c, c.a, c.b, 0.5);
        ASSERT_TRUE(r.value);
        EXPECT_NEAR(*r.value, oracle::two_point_minimax(c.c, c.a, c.b), 1e-6) << serialize_structure(c.c);
        EXPECT_TRUE(check::convex(c.c, c.a, c.b, r));
    }
}

TEST(ConvexArrow, SingleCopyOfAChainFails) {
    const auto r = convex_arrow(make::chain(2), make::chain(1), make::chain(2), 0.5);
    EXPECT_EQ(r.verdict, Verdict::fails);
    EXPECT_NEAR(*r.value, 1.0, 1e-9);
    EXPECT_TRUE(check::convex(make::chain(2), make::chain(1), make::chain(2), r));
    auto forged = r;
    forged.verdict = Verdict::holds;
    EXPECT_FALSE(check::convex(make::chain(2), make::chain(1), make::chain(2), forged));
}

TEST(ConvexArrow, EpsilonAtLeastOneAlwaysHolds) {
    for (double eps : {1.0, 1.5, 7.0}) {
        const auto r = convex_arrow(make::chain(2), make::chain(1), make::chain(2), eps);
        EXPECT_EQ(r.verdict, Verdict::holds);
        EXPECT_TRUE(check::convex(make::chain(2), make::chain(1), make::chain(2), r));
    }
}

TEST(ConvexArrow, StrictInequalityAtTheValue) {
    // The 2-chain has value exactly 1; any epsilon <= 1 below the value fails.
    EXPECT_EQ(convex_arrow(make::chain(2), make::chain(1), make::chain(2), 0.999).verdict, Verdict::fails);
    EXPECT_THROW(convex_arrow(make::chain(2), make::chain(1), make::chain(2), 0.0), InputError);
}

TEST(ConvexArrow, LargerOrders) {
    for (int n : {5, 6}) {
        const auto r = convex_arrow(make::chain(n), make::chain(2), make::chain(3), 0.25);
        ASSERT_TRUE(r.value);
        EXPECT_NEAR(*r.value, 0.0, 1e-9);
        EXPECT_TRUE(check::convex(make::chain(n), make::chain(2), make::chain(3), r));
    }
}

TEST(ConvexArrow, DomainCap) {
    ConvexOptions opts;
    opts.max_domain = 5;
    EXPECT_THROW(convex_arrow(make::chain(4), make::chain(2), make::chain(3), 0.5, opts), ResourceLimit);
}
