#pragma once

// Level-by-level generation of an age up to isomorphism by canonical augmentation:
// every representative of size n-1 is extended by one vertex in all admissible ways, and an
// extension is kept only when the new vertex lies in the automorphism orbit of the vertex
// its canonical labeling places last. Each isomorphism type then has a single parent type,
// so only siblings need deduplication.

#include <map>
#include <vector>

#include "fraisse/age.hpp"
#include "fraisse/budget.hpp"
#include "fraisse/canon.hpp"
#include "fraisse/completion.hpp"

namespace fraisse {

struct EnumeratedStructure {
    CanonicalCode code;
    Structure structure; // canonical representative
};

struct EnumerationLimits {
    std::uint64_t max_candidates = 5'000'000;
};

namespace detail {

inline bool canonical_parent_ok(const Structure& s, Vertex added) {
    const auto lab = canonical_labeling(s);
    Vertex last = -1;
    for (Vertex v = 0; v < s.size(); ++v)
        if (lab.label[static_cast<std::size_t>(v)] == s.size() - 1)
            last = v;
    if (last == added)
        return true;
    const auto with_added = s.with_marks({"__added"}, {{added}});
    const auto with_last = s.with_marks({"__added"}, {{last}});
    return canonical_form(with_added) == canonical_form(with_last);
}

inline std::vector<EnumeratedStructure> sorted_level(std::map<CanonicalCode, Structure>& level) {
    std::vector<EnumeratedStructure> out;
    out.reserve(level.size());
    for (auto& [code, s] : level)
        out.push_back({code, std::move(s)});
    return out;
}

} // namespace detail

/// One canonical representative per isomorphism type of size n in the age, ordered by code.
inline std::vector<EnumeratedStructure> enumerate_with_codes(const AgeSpec& spec, int n,
                                                             EnumerationLimits limits = {},
                                                             Budget* budget = nullptr) {
    if (n < 1)
        throw InputError("enumerate_structures: size must be at least 1");
    if (n > kMaxVertices)
        throw InputError("enumerate_structures: size exceeds the vertex limit");
    std::uint64_t candidates = 0;
    auto count = [&] {
        if (++candidates > limits.max_candidates)
            throw ResourceLimit("enumerate_structures: candidate cap of " + std::to_string(limits.max_candidates) +
                                " exceeded");
    };

    std::map<CanonicalCode, Structure> level;
    for_each_completion(spec, PartialStructure(spec.signature(), 1), [&](const Structure& s) {
        count();
        level.emplace(canonical_form(s), canonical_structure(s));
    }, budget);

    for (int size = 2; size <= n; ++size) {
        std::map<CanonicalCode, Structure> next;
        VertexMap identity(static_cast<std::size_t>(size - 1));
        std::iota(identity.begin(), identity.end(), 0);
        for (const auto& [pcode, parent] : level) {
            PartialStructure partial(spec.signature(), size);
            partial.fix_part(parent, identity);
            for_each_completion(spec, std::move(partial), [&](const Structure& s) {
                count();
                if (!detail::canonical_parent_ok(s, size - 1))
                    return;
                auto lab = canonical_labeling(s, budget);
                if (!next.contains(lab.code))
                    next.emplace(std::move(lab.code), relabel(s, lab.label));
            }, budget);
        }
        level = std::move(next);
    }
    return detail::sorted_level(level);
}

inline std::vector<Structure> enumerate_structures(const AgeSpec& spec, int n, EnumerationLimits limits = {},
                                                   Budget* budget = nullptr) {
    std::vector<Structure> out;
    for (auto& e : enumerate_with_codes(spec, n, limits, budget))
        out.push_back(std::move(e.structure));
    return out;
}

/// All representatives of sizes lo..hi, by size then code.
inline std::vector<Structure> enumerate_up_to(const AgeSpec& spec, int lo, int hi, EnumerationLimits limits = {},
                                              Budget* budget = nullptr) {
    std::vector<Structure> out;
    for (int n = std::max(lo, 1); n <= hi; ++n)
        for (auto& s : enumerate_structures(spec, n, limits, budget))
            out.push_back(std::move(s));
    return out;
}

} // namespace fraisse
