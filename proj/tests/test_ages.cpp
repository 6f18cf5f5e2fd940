#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "fraisse/fraisse.hpp"
#include "oracles.hpp"

using namespace fraisse;

TEST(Catalog, Membership) {
    EXPECT_TRUE(member(catalog::linear_order(), make::chain(4)));
    EXPECT_FALSE(member(catalog::linear_order(), parse_structure("signature: lt/2\nsize: 2\nlt: (0,1) (1,0)\n")));
    EXPECT_FALSE(member(catalog::linear_order(), parse_structure("signature: lt/2\nsize: 2\nlt:\n")));
    EXPECT_TRUE(member(catalog::graph(), make::cycle(5)));
    EXPECT_FALSE(member(catalog::graph(), parse_structure("signature: edge/2\nsize: 2\nedge: (0,1)\n")));
    EXPECT_FALSE(member(catalog::graph_kfree(3), make::complete_graph(3)));
    EXPECT_TRUE(member(catalog::graph_kfree(3), make::cycle(4)));
    EXPECT_TRUE(member(catalog::set(), make::pure_set(3)));
}

TEST(Catalog, ByName) {
    for (const char* name : {"set", "graph", "linear_order", "tournament", "digraph", "graph_kfree:4"})
        EXPECT_EQ(catalog::by_name(name).name(), name);
    EXPECT_THROW(catalog::by_name("nope"), InputError);
}

TEST(AgeFile, ParsesAxiomsAndForbidden) {
    const auto dir = std::filesystem::temp_directory_path() / "fraisse_age_test";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "k3.st") << serialize_structure(make::complete_graph(3));
    std::ofstream(dir / "tf.age") << "name: triangle_free\nsignature: edge/2\naxioms: edge irreflexive symmetric\n"
                                     "forbidden: k3.st\n";
    const auto spec = load_age((dir / "tf.age").string());
    EXPECT_EQ(spec.name(), "triangle_free");
    EXPECT_FALSE(member(spec, make::complete_graph(4)));
    EXPECT_TRUE(member(spec, make::cycle(4)));
    EXPECT_EQ(enumerate_structures(spec, 4).size(), enumerate_structures(catalog::graph_kfree(3), 4).size());
    EXPECT_THROW(parse_age("signature: edge/2\naxioms: edge sideways\n"), InputError);
}

TEST(Enumerate, GraphCountsMatchExhaustive) {
    const std::vector<std::size_t> known{1, 2, 4, 11, 34};
    for (int n = 1; n <= 5; ++n) {
        EXPECT_EQ(enumerate_structures(catalog::graph(), n).size(), known[static_cast<std::size_t>(n - 1)]);
        if (n <= 4)
            EXPECT_EQ(enumerate_structures(catalog::graph(), n).size(), oracle::type_count(catalog::graph(), n));
    }
    EXPECT_EQ(enumerate_structures(catalog::graph(), 6).size(), 156U);
}

TEST(Enumerate, OtherAgesMatchExhaustive) {
    for (int n = 1; n <= 4; ++n) {
        EXPECT_EQ(enumerate_structures(catalog::linear_order(), n).size(), 1U);
        EXPECT_EQ(enumerate_structures(catalog::set(), n).size(), 1U);
        EXPECT_EQ(enumerate_structures(catalog::tournament(), n).size(), oracle::type_count(catalog::tournament(), n));
        EXPECT_EQ(enumerate_structures(catalog::graph_kfree(3), n).size(),
                  oracle::type_count(catalog::graph_kfree(3), n));
    }
    for (int n = 1; n <= 3; ++n)
        EXPECT_EQ(enumerate_structures(catalog::digraph(), n).size(), oracle::type_count(catalog::digraph(), n));
}

TEST(Enumerate, OnePerTypeAndAllMembers) {
    const auto list = enumerate_with_codes(catalog::graph(), 5);
    std::set<CanonicalCode> codes;
    for (const auto& e : list) {
        EXPECT_TRUE(member(catalog::graph(), e.structure));
        EXPECT_EQ(canonical_form(e.structure), e.code);
        codes.insert(e.code);
    }
    EXPECT_EQ(codes.size(), list.size());
    EXPECT_TRUE(std::is_sorted(list.begin(), list.end(), [](const auto& x, const auto& y) { return x.code < y.code; }));
}

TEST(Age, Hereditary) {
    std::mt19937 rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = oracle::random_member(catalog::graph_kfree(3), 6, rng, 0.3);
        for (std::uint32_t mask = 1; mask < (1U << 6); ++mask) {
            std::vector<Vertex> vs;
            for (int v = 0; v < 6; ++v)
                if ((mask >> v) & 1U)
                    vs.push_back(v);
            EXPECT_TRUE(member(catalog::graph_kfree(3), induced_substructure(s, vs)));
        }
    }
}

TEST(Amalgamation, GraphsAndOrdersHaveIt) {
    const auto g = amalgamation_probe(catalog::graph(), AmalgamationProperty::free_amalgamation, 3);
    EXPECT_FALSE(g.counterexample.has_value());
    EXPECT_EQ(g.holds_up_to, 3);
    const auto o = amalgamation_probe(catalog::linear_order(), AmalgamationProperty::amalgamation, 3);
    EXPECT_FALSE(o.counterexample.has_value());
    const auto k3 = amalgamation_probe(catalog::graph_kfree(3), AmalgamationProperty::free_amalgamation, 3);
    EXPECT_FALSE(k3.counterexample.has_value());
}

TEST(Amalgamation, OrdersAndTournamentsAreNotFree) {
    const auto o = amalgamation_probe(catalog::linear_order(), AmalgamationProperty::free_amalgamation, 2);
    ASSERT_TRUE(o.counterexample.has_value());
    EXPECT_FALSE(find_amalgam(catalog::linear_order(), AmalgamationProperty::free_amalgamation, *o.counterexample));
    EXPECT_TRUE(check::amalgamation_counterexample(catalog::linear_order(), AmalgamationProperty::free_amalgamation,
                                                   *o.counterexample));
    EXPECT_TRUE(amalgamation_probe(catalog::tournament(), AmalgamationProperty::free_amalgamation, 2).counterexample);
}

TEST(Amalgamation, NamesRoundTrip) {
    for (auto p : {AmalgamationProperty::joint_embedding, AmalgamationProperty::amalgamation,
                   AmalgamationProperty::free_amalgamation})
        EXPECT_EQ(amalgamation_property_from_string(to_string(p)), p);
    EXPECT_EQ(amalgamation_property_from_string("ap"), AmalgamationProperty::amalgamation);
    EXPECT_THROW(amalgamation_property_from_string("x"), InputError);
}
