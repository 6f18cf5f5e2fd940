#pragma once

// Joint embeddings with union support and their isomorphism types (joint embedding patterns).
//
// A pattern is the canonical code of the union structure expanded by one unary mark per
// (part, position): mark m<i>_<p> holds exactly at the image of position p of part i. Two joint
// embeddings get the same code iff some isomorphism of the unions carries every part onto the
// corresponding part, which is pattern equality.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fraisse/age.hpp"
#include "fraisse/budget.hpp"
#include "fraisse/canon.hpp"
#include "fraisse/completion.hpp"
#include "fraisse/embedding.hpp"

namespace fraisse {

struct JointEmbedding {
    Structure host;
    std::vector<Embedding> parts; // parts[0] is the A-part, the rest the Z-parts in order
};

struct PatternCode {
    CanonicalCode code;

    friend bool operator==(const PatternCode&, const PatternCode&) = default;
    friend auto operator<=>(const PatternCode&, const PatternCode&) = default;
};

namespace detail {

inline std::string mark_name(std::size_t part, std::size_t position) {
    return "m" + std::to_string(part) + "_" + std::to_string(position);
}

inline Structure marked_expansion(const Structure& host, const std::vector<const Embedding*>& parts) {
    std::vector<std::string> names;
    std::vector<std::vector<Vertex>> marks;
    for (std::size_t i = 0; i < parts.size(); ++i)
        for (std::size_t p = 0; p < parts[i]->size(); ++p) {
            names.push_back(mark_name(i, p));
            marks.push_back({(*parts[i])[p]});
        }
    return host.with_marks(names, marks);
}

} // namespace detail

/// Pattern of parts inside a (not necessarily union-supported) host: restricts to the union of images.
inline PatternCode pattern_in(const Structure& host, const std::vector<const Embedding*>& parts) {
    std::vector<Vertex> support;
    for (const auto* e : parts)
        support.insert(support.end(), e->map.begin(), e->map.end());
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    for (Vertex v : support)
        if (v < 0 || v >= host.size())
            throw InputError("pattern: part maps outside the host");
    if (static_cast<int>(support.size()) == host.size())
        return {canonical_form(detail::marked_expansion(host, parts))};
    std::vector<Vertex> local(static_cast<std::size_t>(host.size()), -1);
    for (std::size_t i = 0; i < support.size(); ++i)
        local[static_cast<std::size_t>(support[i])] = static_cast<Vertex>(i);
    const auto sub = induced_substructure(host, support);
    std::vector<Embedding> moved;
    moved.reserve(parts.size());
    for (const auto* e : parts) {
        Embedding m;
        for (Vertex v : e->map)
            m.map.push_back(local[static_cast<std::size_t>(v)]);
        moved.push_back(std::move(m));
    }
    std::vector<const Embedding*> ptrs;
    for (const auto& m : moved)
        ptrs.push_back(&m);
    return {canonical_form(detail::marked_expansion(sub, ptrs))};
}

inline PatternCode pattern_in(const Structure& host, const Embedding& a, const Embedding& z) {
    return pattern_in(host, std::vector<const Embedding*>{&a, &z});
}

/// Pattern of a union-supported joint embedding.
inline PatternCode pattern_of(const JointEmbedding& j) {
    std::vector<bool> covered(static_cast<std::size_t>(j.host.size()), false);
    for (const auto& e : j.parts)
        for (Vertex v : e.map) {
            if (v < 0 || v >= j.host.size())
                throw InputError("pattern_of: part maps outside the host");
            covered[static_cast<std::size_t>(v)] = true;
        }
    for (std::size_t v = 0; v < covered.size(); ++v)
        if (!covered[v])
            throw InputError("pattern_of: host vertex " + std::to_string(v) + " is not covered by any part");
    std::vector<const Embedding*> ptrs;
    for (const auto& e : j.parts)
        ptrs.push_back(&e);
    return {canonical_form(detail::marked_expansion(j.host, ptrs))};
}

struct UnionOptions {
    int max_size = kMaxVertices;   // cap on the union's vertex count
    bool allow_overlap = true;     // identify vertices of different parts beyond the forced ones
    // forced[j][p] >= 0 pins position p of part j (j >= 1) onto that vertex of part 0.
    std::vector<std::vector<Vertex>> forced;
};

namespace detail {

class UnionSearch {
public:
    UnionSearch(const AgeSpec& spec, const std::vector<Structure>& parts, const UnionOptions& opts, Budget* budget)
        : spec_(spec), parts_(parts), opts_(opts), budget_(budget) {
        for (const auto& p : parts_)
            if (!(p.signature() == spec_.signature()))
                throw InputError("joint embeddings: signature mismatch");
        maps_.resize(parts_.size());
        for (std::size_t j = 0; j < parts_.size(); ++j)
            maps_[j].assign(static_cast<std::size_t>(parts_[j].size()), -1);
    }

    template <class F>
    bool run(F& visit) {
        if (parts_.empty())
            return true;
        if (parts_[0].size() > opts_.max_size)
            return true;
        for (Vertex v = 0; v < parts_[0].size(); ++v)
            maps_[0][static_cast<std::size_t>(v)] = v;
        host_size_ = parts_[0].size();
        used_.assign(static_cast<std::size_t>(kMaxVertices), -1);
        return place(1, 0, visit);
    }

private:
    [[nodiscard]] Vertex forced_target(std::size_t j, std::size_t p) const {
        if (j < opts_.forced.size() && p < opts_.forced[j].size())
            return opts_.forced[j][p];
        return -1;
    }

    template <class F>
    bool place(std::size_t j, std::size_t p, F& visit) {
        if (j == parts_.size())
            return complete(visit);
        if (p == maps_[j].size())
            return place(j + 1, 0, visit);
        if (budget_)
            budget_->tick();
        const Vertex pinned = forced_target(j, p);
        auto try_vertex = [&](Vertex x, bool fresh) -> bool {
            if (used_[static_cast<std::size_t>(x)] == static_cast<int>(j))
                return true;
            maps_[j][p] = x;
            if (fresh)
                ++host_size_;
            const int previous = used_[static_cast<std::size_t>(x)];
            used_[static_cast<std::size_t>(x)] = static_cast<int>(j);
            bool go_on = true;
            if (consistent(j, p))
                go_on = place(j, p + 1, visit);
            used_[static_cast<std::size_t>(x)] = previous;
            if (fresh)
                --host_size_;
            maps_[j][p] = -1;
            return go_on;
        };
        if (pinned >= 0)
            return try_vertex(pinned, false);
        if (host_size_ < opts_.max_size && !try_vertex(host_size_, true))
            return false;
        if (opts_.allow_overlap)
            for (Vertex x = 0; x < host_size_; ++x)
                if (!pinned_elsewhere(j, x) && !try_vertex(x, false))
                    return false;
        return true;
    }

    // A part-0 vertex that some other position of part j is pinned to.
    [[nodiscard]] bool pinned_elsewhere(std::size_t j, Vertex x) const {
        if (j >= opts_.forced.size())
            return false;
        for (Vertex t : opts_.forced[j])
            if (t == x)
                return true;
        return false;
    }

    // Part j's tuples among its placed positions agree with every other part placed on the same vertices.
    bool consistent(std::size_t j, std::size_t p) {
        const auto& part = parts_[j];
        for (std::size_t sym = 0; sym < part.signature().size(); ++sym) {
            const auto& tab = part.table(sym);
            const int r = tab.arity();
            Tuple local(static_cast<std::size_t>(r)), img(static_cast<std::size_t>(r));
            // Odometer over positions 0..p containing p.
            std::vector<std::size_t> idx(static_cast<std::size_t>(r), 0);
            for (;;) {
                bool has_p = false;
                for (int k = 0; k < r; ++k) {
                    local[static_cast<std::size_t>(k)] = static_cast<Vertex>(idx[static_cast<std::size_t>(k)]);
                    has_p = has_p || idx[static_cast<std::size_t>(k)] == p;
                }
                if (has_p) {
                    for (int k = 0; k < r; ++k)
                        img[static_cast<std::size_t>(k)] = maps_[j][static_cast<std::size_t>(local[static_cast<std::size_t>(k)])];
                    const bool value = tab.test(local);
                    for (std::size_t other = 0; other < parts_.size(); ++other) {
                        if (other == j)
                            continue;
                        if (!covers(other, img, local))
                            continue;
                        if (parts_[other].holds(sym, local) != value)
                            return false;
                    }
                }
                int k = r - 1;
                while (k >= 0 && ++idx[static_cast<std::size_t>(k)] > p) {
                    idx[static_cast<std::size_t>(k)] = 0;
                    --k;
                }
                if (k < 0)
                    break;
            }
        }
        return true;
    }

    // Whether every vertex of `img` is an image of a placed position of part `other`; writes the preimage.
    bool covers(std::size_t other, const Tuple& img, Tuple& pre) const {
        const auto& m = maps_[other];
        for (std::size_t k = 0; k < img.size(); ++k) {
            Vertex found = -1;
            for (std::size_t q = 0; q < m.size(); ++q)
                if (m[q] == img[k]) {
                    found = static_cast<Vertex>(q);
                    break;
                }
            if (found < 0)
                return false;
            pre[k] = found;
        }
        return true;
    }

    template <class F>
    bool complete(F& visit) {
        PartialStructure partial(spec_.signature(), host_size_);
        for (std::size_t j = 0; j < parts_.size(); ++j)
            if (!partial.fix_part(parts_[j], maps_[j]))
                return true;
        std::vector<Embedding> es;
        for (const auto& m : maps_)
            es.push_back(Embedding{m});
        return for_each_completion(spec_, std::move(partial), [&](const Structure& host) {
            if constexpr (std::is_same_v<std::invoke_result_t<F&, const Structure&, const std::vector<Embedding>&>, bool>)
                return visit(host, es);
            else {
                visit(host, es);
                return true;
            }
        }, budget_);
    }

    const AgeSpec& spec_;
    const std::vector<Structure>& parts_;
    const UnionOptions& opts_;
    Budget* budget_;
    std::vector<VertexMap> maps_;
    std::vector<int> used_;
    int host_size_ = 0;
};

} // namespace detail

/// Visits (host, part maps) for every union-supported joint embedding of `parts` inside the age.
/// Identifications are tried fresh-vertex first, so the first host of each overlap is the disjoint one.
/// Visitors may return false to stop. Distinct visits may share a pattern.
template <class F>
bool for_each_union(const AgeSpec& spec, const std::vector<Structure>& parts, F&& visit,
                    const UnionOptions& opts = {}, Budget* budget = nullptr) {
    detail::UnionSearch search(spec, parts, opts, budget);
    return search.run(visit);
}

struct PatternEntry {
    PatternCode code;
    JointEmbedding witness;
};

/// One joint embedding of (a, zs...) per pattern, ordered by pattern code.
inline std::vector<PatternEntry> joint_embeddings(const AgeSpec& spec, const Structure& a, const std::vector<Structure>& zs,
                                                  Budget* budget = nullptr, int max_size = kMaxVertices) {
    std::vector<Structure> parts{a};
    parts.insert(parts.end(), zs.begin(), zs.end());
    for (const auto& p : parts)
        if (!(p.signature() == spec.signature()))
            throw InputError("joint_embeddings: signature mismatch");
    std::map<PatternCode, JointEmbedding> found;
    UnionOptions opts;
    opts.max_size = max_size;
    for_each_union(spec, parts, [&](const Structure& host, const std::vector<Embedding>& maps) {
        JointEmbedding j{host, maps};
        auto code = pattern_of(j);
        if (!found.contains(code))
            found.emplace(std::move(code), std::move(j));
    }, opts, budget);
    std::vector<PatternEntry> out;
    for (auto& [code, j] : found)
        out.push_back({code, std::move(j)});
    return out;
}

inline std::size_t pattern_count(const AgeSpec& spec, const Structure& a, const Structure& z, Budget* budget = nullptr) {
    return joint_embeddings(spec, a, {z}, budget).size();
}

} // namespace fraisse
