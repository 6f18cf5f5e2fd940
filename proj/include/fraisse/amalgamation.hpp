#pragma once

// Bounded probes of the joint embedding, amalgamation and free amalgamation properties.
// A probe covers every instance whose structures have at most `bound` vertices and searches
// amalgams of size at most |B|+|C|. Only a counterexample is conclusive for the whole class.

#include <optional>
#include <string>
#include <vector>

#include "fraisse/age.hpp"
#include "fraisse/enumerate.hpp"
#include "fraisse/patterns.hpp"

namespace fraisse {

enum class AmalgamationProperty { joint_embedding, amalgamation, free_amalgamation };

inline std::string to_string(AmalgamationProperty p) {
    switch (p) {
    case AmalgamationProperty::joint_embedding: return "joint-embedding";
    case AmalgamationProperty::amalgamation: return "amalgamation";
    case AmalgamationProperty::free_amalgamation: return "free-amalgamation";
    }
    return "?";
}

inline AmalgamationProperty amalgamation_property_from_string(const std::string& s) {
    if (s == "joint-embedding" || s == "jep")
        return AmalgamationProperty::joint_embedding;
    if (s == "amalgamation" || s == "ap")
        return AmalgamationProperty::amalgamation;
    if (s == "free-amalgamation" || s == "free")
        return AmalgamationProperty::free_amalgamation;
    throw InputError("unknown amalgamation property '" + s + "'");
}

/// An instance with no completion: embeddings f: A -> B and g: A -> C (A absent for joint embedding).
struct AmalgamationInstance {
    std::optional<Structure> a;
    Structure b;
    Structure c;
    Embedding f;
    Embedding g;
};

struct AmalgamationReport {
    AmalgamationProperty property{};
    int bound = 0;
    int holds_up_to = 0; // every instance with all sizes <= holds_up_to has a completion
    std::uint64_t instances = 0;
    std::optional<AmalgamationInstance> counterexample;
};

/// Completion of one instance, or nothing. The free variant builds the disjoint union over A with no new tuples.
inline std::optional<JointEmbedding> find_amalgam(const AgeSpec& spec, AmalgamationProperty property,
                                                  const AmalgamationInstance& inst, Budget* budget = nullptr) {
    const int nb = inst.b.size();
    const int nc = inst.c.size();
    UnionOptions opts;
    opts.max_size = nb + nc;
    opts.forced.assign(2, {});
    opts.forced[1].assign(static_cast<std::size_t>(nc), -1);
    if (inst.a)
        for (std::size_t i = 0; i < inst.g.size(); ++i)
            opts.forced[1][static_cast<std::size_t>(inst.g[i])] = inst.f[i];

    if (property == AmalgamationProperty::free_amalgamation) {
        VertexMap cmap(static_cast<std::size_t>(nc));
        int next = nb;
        for (int v = 0; v < nc; ++v) {
            const auto pinned = opts.forced[1][static_cast<std::size_t>(v)];
            cmap[static_cast<std::size_t>(v)] = pinned >= 0 ? pinned : next++;
        }
        PartialStructure partial(spec.signature(), next);
        VertexMap bmap(static_cast<std::size_t>(nb));
        std::iota(bmap.begin(), bmap.end(), 0);
        if (!partial.fix_part(inst.b, bmap) || !partial.fix_part(inst.c, cmap))
            return std::nullopt;
        auto host = partial.freeze_absent();
        if (!member(spec, host))
            return std::nullopt;
        return JointEmbedding{std::move(host), {Embedding{bmap}, Embedding{cmap}}};
    }

    std::optional<JointEmbedding> found;
    const std::vector<Structure> parts{inst.b, inst.c};
    for_each_union(spec, parts, [&](const Structure& host, const std::vector<Embedding>& maps) {
        found = JointEmbedding{host, maps};
        return false;
    }, opts, budget);
    return found;
}

inline AmalgamationReport amalgamation_probe(const AgeSpec& spec, AmalgamationProperty property, int bound,
                                             Budget* budget = nullptr) {
    if (bound < 1)
        throw InputError("amalgamation_probe: bound must be at least 1");
    AmalgamationReport report;
    report.property = property;
    report.bound = bound;

    std::vector<std::vector<Structure>> by_size(static_cast<std::size_t>(bound + 1));
    for (int n = 1; n <= bound; ++n)
        by_size[static_cast<std::size_t>(n)] = enumerate_structures(spec, n, {}, budget);

    // Instances are grouped by their largest structure so holds_up_to is exact.
    for (int top = 1; top <= bound; ++top) {
        auto check = [&](AmalgamationInstance inst) -> bool {
            ++report.instances;
            if (find_amalgam(spec, property, inst, budget))
                return true;
            report.counterexample = std::move(inst);
            return false;
        };
        for (int nb = 1; nb <= top; ++nb)
            for (int nc = 1; nc <= top; ++nc) {
                if (std::max(nb, nc) != top)
                    continue;
                for (const auto& b : by_size[static_cast<std::size_t>(nb)])
                    for (const auto& c : by_size[static_cast<std::size_t>(nc)]) {
                        if (property == AmalgamationProperty::joint_embedding) {
                            if (!check({std::nullopt, b, c, {}, {}}))
                                return report;
                            continue;
                        }
                        for (int na = 1; na <= std::min(nb, nc); ++na)
                            for (const auto& a : by_size[static_cast<std::size_t>(na)])
                                for (const auto& f : embeddings(a, b, budget))
                                    for (const auto& g : embeddings(a, c, budget))
                                        if (!check({a, b, c, f, g}))
                                            return report;
                    }
            }
        report.holds_up_to = top;
    }
    return report;
}

} // namespace fraisse
