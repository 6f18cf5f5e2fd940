#pragma once

// Automorphism groups of finite structures, their orbits on embedding sets, and the invariant
// partitions of those sets (blocks fixed setwise by every automorphism), including families of
// partitions that cohere along a chain F_1 ⊆ F_2 ⊆ ... of finite approximants.

#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

#include "fraisse/age.hpp"
#include "fraisse/budget.hpp"
#include "fraisse/canon.hpp"
#include "fraisse/embedding.hpp"

namespace fraisse {

struct AutomorphismSet {
    Structure host;
    std::vector<VertexMap> elements; // lexicographic order; elements[0] is the identity
};

/// Every automorphism, one per refinement leaf equivalent to the first leaf.
inline AutomorphismSet automorphisms(const Structure& s, std::size_t max_elements = 1'000'000,
                                     Budget* budget = nullptr) {
    AutomorphismSet out{s, {}};
    std::vector<int> first;
    CanonicalCode first_code;
    std::vector<Vertex> first_inverse;
    for_each_refinement_leaf(s, [&](const detail::Refiner& r, const std::vector<int>& label) {
        auto code = r.leaf_code(label);
        if (first.empty()) {
            first = label;
            first_code = std::move(code);
            first_inverse.assign(label.size(), 0);
            for (std::size_t v = 0; v < label.size(); ++v)
                first_inverse[static_cast<std::size_t>(label[v])] = static_cast<Vertex>(v);
        } else if (code != first_code) {
            return;
        }
        VertexMap g(label.size());
        for (std::size_t v = 0; v < label.size(); ++v)
            g[v] = first_inverse[static_cast<std::size_t>(label[v])];
        out.elements.push_back(std::move(g));
        if (out.elements.size() > max_elements)
            throw ResourceLimit("automorphisms: group exceeds " + std::to_string(max_elements) + " elements");
    }, budget);
    std::sort(out.elements.begin(), out.elements.end());
    return out;
}

/// A partition of base = embeddings(A, host) into blocks of indices into base.
struct InvariantPartition {
    std::vector<Embedding> base;
    std::vector<std::vector<int>> blocks; // each sorted; blocks ordered by first element

    friend bool operator==(const InvariantPartition&, const InvariantPartition&) = default;
};

namespace detail {

inline void normalize_blocks(std::vector<std::vector<int>>& blocks) {
    for (auto& b : blocks)
        std::sort(b.begin(), b.end());
    blocks.erase(std::remove_if(blocks.begin(), blocks.end(), [](const auto& b) { return b.empty(); }), blocks.end());
    std::sort(blocks.begin(), blocks.end());
}

inline std::map<VertexMap, int> index_of(const std::vector<Embedding>& base) {
    std::map<VertexMap, int> idx;
    for (std::size_t i = 0; i < base.size(); ++i)
        idx.emplace(base[i].map, static_cast<int>(i));
    return idx;
}

} // namespace detail

/// Permutation of embedding indices induced by g: a -> g∘a.
inline std::vector<int> act_on_embeddings(const VertexMap& g, const std::vector<Embedding>& base,
                                          const std::map<VertexMap, int>& index) {
    std::vector<int> perm(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        VertexMap img;
        img.reserve(base[i].size());
        for (Vertex v : base[i].map)
            img.push_back(g[static_cast<std::size_t>(v)]);
        perm[i] = index.at(img);
    }
    return perm;
}

inline InvariantPartition orbits_on_embeddings(const Structure& s, const Structure& a, Budget* budget = nullptr) {
    InvariantPartition out;
    out.base = embeddings(a, s, budget);
    const auto index = detail::index_of(out.base);
    const auto group = automorphisms(s, 1'000'000, budget);
    std::vector<int> parent(out.base.size());
    std::iota(parent.begin(), parent.end(), 0);
    for (const auto& g : group.elements) {
        const auto perm = act_on_embeddings(g, out.base, index);
        for (std::size_t i = 0; i < perm.size(); ++i) {
            const int x = detail::find_root(parent, static_cast<int>(i));
            const int y = detail::find_root(parent, perm[i]);
            if (x != y)
                parent[static_cast<std::size_t>(std::max(x, y))] = std::min(x, y);
        }
    }
    std::map<int, std::vector<int>> groups;
    for (std::size_t i = 0; i < parent.size(); ++i)
        groups[detail::find_root(parent, static_cast<int>(i))].push_back(static_cast<int>(i));
    for (auto& [root, members] : groups)
        out.blocks.push_back(std::move(members));
    detail::normalize_blocks(out.blocks);
    return out;
}

/// Whether every automorphism fixes every block setwise.
inline bool is_invariant(const InvariantPartition& p, const AutomorphismSet& group) {
    const auto index = detail::index_of(p.base);
    std::vector<int> block_of(p.base.size(), -1);
    for (std::size_t b = 0; b < p.blocks.size(); ++b)
        for (int i : p.blocks[b])
            block_of[static_cast<std::size_t>(i)] = static_cast<int>(b);
    for (const auto& g : group.elements) {
        const auto perm = act_on_embeddings(g, p.base, index);
        for (std::size_t i = 0; i < perm.size(); ++i)
            if (block_of[i] != block_of[static_cast<std::size_t>(perm[i])])
                return false;
    }
    return true;
}

/// Whether `fine` refines `coarse` (same base).
inline bool refines(const InvariantPartition& fine, const InvariantPartition& coarse) {
    std::vector<int> block_of(coarse.base.size(), -1);
    for (std::size_t b = 0; b < coarse.blocks.size(); ++b)
        for (int i : coarse.blocks[b])
            block_of[static_cast<std::size_t>(i)] = static_cast<int>(b);
    for (const auto& blk : fine.blocks)
        for (int i : blk)
            if (block_of[static_cast<std::size_t>(i)] != block_of[static_cast<std::size_t>(blk.front())])
                return false;
    return true;
}

/// All invariant partitions with at most max_blocks blocks: the coarsenings of the orbit partition.
inline std::vector<InvariantPartition> invariant_partitions(const Structure& s, const Structure& a, int max_blocks,
                                                            std::size_t max_results = 100'000,
                                                            Budget* budget = nullptr) {
    if (max_blocks < 1)
        throw InputError("invariant_partitions: max_blocks must be at least 1");
    const auto orbits = orbits_on_embeddings(s, a, budget);
    const auto m = orbits.blocks.size();
    std::vector<InvariantPartition> out;
    if (m == 0) {
        out.push_back(orbits);
        return out;
    }
    // Restricted growth strings over the orbits.
    std::vector<int> rgs(m, 0);
    auto emit = [&](int nblocks) {
        InvariantPartition p;
        p.base = orbits.base;
        p.blocks.assign(static_cast<std::size_t>(nblocks), {});
        for (std::size_t o = 0; o < m; ++o) {
            auto& blk = p.blocks[static_cast<std::size_t>(rgs[o])];
            blk.insert(blk.end(), orbits.blocks[o].begin(), orbits.blocks[o].end());
        }
        detail::normalize_blocks(p.blocks);
        out.push_back(std::move(p));
        if (out.size() > max_results)
            throw ResourceLimit("invariant_partitions: more than " + std::to_string(max_results) + " partitions");
    };
    auto rec = [&](auto&& self, std::size_t i, int used) -> void {
        if (budget)
            budget->tick();
        if (i == m) {
            emit(used);
            return;
        }
        for (int b = 0; b <= used && b < max_blocks; ++b) {
            rgs[i] = b;
            self(self, i + 1, std::max(used, b + 1));
        }
    };
    rgs[0] = 0;
    rec(rec, 1, 1);
    return out;
}

struct CoherenceReport {
    std::vector<std::vector<InvariantPartition>> families;
    bool only_trivial = false; // every surviving family is one block at every level
};

namespace detail {

// Partition that `p` induces on `sub_base`, the embeddings into the previous chain level.
inline std::vector<std::vector<int>> restrict_blocks(const InvariantPartition& p, const std::vector<Embedding>& sub_base) {
    const auto index = index_of(p.base);
    std::map<int, std::vector<int>> grouped;
    std::vector<int> block_of(p.base.size(), -1);
    for (std::size_t b = 0; b < p.blocks.size(); ++b)
        for (int i : p.blocks[b])
            block_of[static_cast<std::size_t>(i)] = static_cast<int>(b);
    for (std::size_t i = 0; i < sub_base.size(); ++i)
        grouped[block_of[static_cast<std::size_t>(index.at(sub_base[i].map))]].push_back(static_cast<int>(i));
    std::vector<std::vector<int>> out;
    for (auto& [b, members] : grouped)
        out.push_back(std::move(members));
    normalize_blocks(out);
    return out;
}

} // namespace detail

/// Chain F_1 ⊆ ... ⊆ F_m with F_i the substructure of F_{i+1} on its first |F_i| vertices.
inline void check_chain(const AgeSpec& spec, const std::vector<Structure>& chain) {
    for (std::size_t i = 0; i < chain.size(); ++i) {
        if (!member(spec, chain[i]))
            throw InputError("chain: level " + std::to_string(i + 1) + " is not in the age");
        if (i + 1 < chain.size()) {
            if (chain[i].size() > chain[i + 1].size())
                throw InputError("chain: level " + std::to_string(i + 1) + " is larger than the next level");
            std::vector<Vertex> prefix(static_cast<std::size_t>(chain[i].size()));
            std::iota(prefix.begin(), prefix.end(), 0);
            if (!(induced_substructure(chain[i + 1], prefix) == chain[i]))
                throw InputError("chain: level " + std::to_string(i + 1) +
                                 " is not the initial substructure of the next level");
        }
    }
}

inline CoherenceReport coherent_partitions(const AgeSpec& spec, const std::vector<Structure>& chain, const Structure& a,
                                           int max_blocks, std::size_t max_families = 100'000,
                                           Budget* budget = nullptr) {
    CoherenceReport report;
    if (chain.empty())
        return report;
    check_chain(spec, chain);
    std::vector<std::vector<InvariantPartition>> levels;
    for (const auto& f : chain)
        levels.push_back(invariant_partitions(f, a, max_blocks, 100'000, budget));

    std::vector<InvariantPartition> current;
    auto rec = [&](auto&& self, std::size_t level) -> void {
        if (budget)
            budget->tick();
        if (level == levels.size()) {
            report.families.push_back(current);
            if (report.families.size() > max_families)
                throw ResourceLimit("coherent_partitions: more than " + std::to_string(max_families) + " families");
            return;
        }
        for (const auto& p : levels[level]) {
            if (level > 0 && detail::restrict_blocks(p, current.back().base) != current.back().blocks)
                continue;
            current.push_back(p);
            self(self, level + 1);
            current.pop_back();
        }
    };
    rec(rec, 0);
    report.only_trivial = !report.families.empty() &&
                          std::all_of(report.families.begin(), report.families.end(), [](const auto& fam) {
                              return std::all_of(fam.begin(), fam.end(),
                                                 [](const InvariantPartition& p) { return p.blocks.size() <= 1; });
                          });
    return report;
}

} // namespace fraisse
