#pragma once

// Pattern-colorings: the definable arrow C -> (B)^A_Z, its simultaneous version over several
// Z's restricted to stable pairs, and the joint-embedding witnesses <b, z> whose coloring
// a -> [b∘a, z] is constant.
//
// Quantifiers over joint embeddings range over one representative per pattern code, which
// suffices because every condition checked is invariant under pattern isomorphism.

#include <optional>
#include <vector>

#include "fraisse/arrows.hpp"
#include "fraisse/patterns.hpp"
#include "fraisse/stability.hpp"

namespace fraisse {

struct DefinableCase {
    JointEmbedding joint;          // parts[0] is c: C -> host, parts[1..] the z's
    std::optional<Embedding> copy; // b: B -> C making every pattern coloring constant
};

struct DefinableArrowResult {
    Verdict verdict = Verdict::holds;
    std::string reason;
    std::vector<DefinableCase> cases; // by pattern code; on failure the last entry is the offending one
    std::vector<UnstableWitness> instability; // precondition failures of the stable variant
    int depth = 0;                            // stability depth checked by the stable variant
};

namespace detail {

// Whether a -> [c∘b∘a, z_i] is constant for every coordinate i.
inline bool pattern_constant(const JointEmbedding& j, const Embedding& b, const std::vector<Embedding>& inner) {
    const auto& c = j.parts[0];
    const auto cb = compose(c, b);
    for (std::size_t i = 1; i < j.parts.size(); ++i) {
        std::optional<PatternCode> first;
        for (const auto& a : inner) {
            const auto ca = compose(cb, a);
            auto code = pattern_in(j.host, ca, j.parts[i]);
            if (!first)
                first = std::move(code);
            else if (code != *first)
                return false;
        }
    }
    return true;
}

inline DefinableArrowResult definable_core(const AgeSpec& spec, const Structure& c, const Structure& a,
                                           const Structure& b, const std::vector<Structure>& zs, Budget* budget) {
    for (const auto* s : {&a, &b, &c})
        if (!member(spec, *s))
            throw InputError("definable arrow: A, B and C must belong to the age");
    for (const auto& z : zs)
        if (!member(spec, z))
            throw InputError("definable arrow: every Z must belong to the age");
    DefinableArrowResult r;
    const auto copies = embeddings(b, c, budget);
    const auto inner = embeddings(a, b, budget);
    if (copies.empty()) {
        r.verdict = Verdict::fails;
        r.reason = "no copy of B";
        return r;
    }
    if (inner.empty()) {
        r.verdict = Verdict::degenerate_holds;
        r.reason = "A does not embed in B";
        return r;
    }
    for (auto& entry : joint_embeddings(spec, c, zs, budget)) {
        if (budget)
            budget->tick();
        DefinableCase dc{std::move(entry.witness), std::nullopt};
        for (const auto& e : copies)
            if (pattern_constant(dc.joint, e, inner)) {
                dc.copy = e;
                break;
            }
        const bool ok = dc.copy.has_value();
        r.cases.push_back(std::move(dc));
        if (!ok) {
            r.verdict = Verdict::fails;
            r.reason = "a joint embedding of C and Z admits no copy of B with constant patterns";
            return r;
        }
    }
    r.verdict = Verdict::holds;
    r.reason = "every joint embedding pattern admits a copy of B with constant patterns";
    return r;
}

} // namespace detail

inline DefinableArrowResult definable_arrow(const AgeSpec& spec, const Structure& c, const Structure& a,
                                            const Structure& b, const Structure& z, Budget* budget = nullptr) {
    return detail::definable_core(spec, c, a, b, {z}, budget);
}

/// The definable arrow for all coordinates at once, after checking that each (A, Z_i) has no
/// unstable sequence of the given depth.
inline DefinableArrowResult stable_arrow(const AgeSpec& spec, const Structure& c, const Structure& a,
                                         const Structure& b, const std::vector<Structure>& zs, int depth,
                                         int max_host = 0, Budget* budget = nullptr) {
    DefinableArrowResult pre;
    pre.depth = depth;
    for (const auto& z : zs) {
        auto report = stability_search(spec, a, z, depth, max_host, budget);
        if (report.witness)
            pre.instability.push_back(std::move(*report.witness));
    }
    if (!pre.instability.empty()) {
        pre.verdict = Verdict::precondition_failed;
        pre.reason = "some pair (A, Z) has an unstable sequence of the given depth";
        return pre;
    }
    auto r = detail::definable_core(spec, c, a, b, zs, budget);
    r.depth = depth;
    return r;
}

/// Disjoint union of B and Z with no tuple meeting both, when it lies in the age.
inline std::optional<JointEmbedding> free_join(const AgeSpec& spec, const Structure& b, const Structure& z) {
    const int n = b.size() + z.size();
    if (n > kMaxVertices)
        return std::nullopt;
    PartialStructure partial(spec.signature(), n);
    VertexMap bm(static_cast<std::size_t>(b.size())), zm(static_cast<std::size_t>(z.size()));
    std::iota(bm.begin(), bm.end(), 0);
    std::iota(zm.begin(), zm.end(), b.size());
    if (!partial.fix_part(b, bm) || !partial.fix_part(z, zm))
        return std::nullopt;
    auto host = partial.freeze_absent();
    if (!member(spec, host))
        return std::nullopt;
    return JointEmbedding{std::move(host), {Embedding{bm}, Embedding{zm}}};
}

/// Whether a -> [b∘a, z] is constant on embeddings(A, B) for the joint embedding <b, z>.
inline bool is_roelcke_witness(const JointEmbedding& j, const Structure& a, const Structure& b) {
    const auto inner = embeddings(a, b);
    std::optional<PatternCode> first;
    for (const auto& e : inner) {
        auto code = pattern_in(j.host, compose(j.parts[0], e), j.parts[1]);
        if (!first)
            first = std::move(code);
        else if (code != *first)
            return false;
    }
    return true;
}

/// First union-supported joint embedding <b, z> (fresh vertices and absent tuples tried first)
/// on which a -> [b∘a, z] is constant.
inline std::optional<JointEmbedding> roelcke_witness(const AgeSpec& spec, const Structure& a, const Structure& b,
                                                     const Structure& z, int max_n, Budget* budget = nullptr) {
    for (const auto* s : {&a, &b, &z})
        if (!member(spec, *s))
            throw InputError("roelcke-witness: A, B and Z must belong to the age");
    UnionOptions opts;
    opts.max_size = std::min(max_n, b.size() + z.size());
    std::optional<JointEmbedding> found;
    const std::vector<Structure> parts{b, z};
    for_each_union(spec, parts, [&](const Structure& host, const std::vector<Embedding>& maps) {
        JointEmbedding j{host, maps};
        if (!is_roelcke_witness(j, a, b))
            return true;
        found = std::move(j);
        return false;
    }, opts, budget);
    return found;
}

} // namespace fraisse
