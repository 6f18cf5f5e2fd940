#pragma once

// Canonical labeling by individualization-refinement.
//
// Vertex colorings are refined to equitable partitions using, for every vertex, the sorted
// multiset of (symbol, position, colors of the tuple) over the relation tuples containing it.
// The search individualizes each vertex of the first non-singleton cell in turn; every leaf is
// a discrete coloring, i.e. a labeling, and the canonical code is the lexicographically least
// relation encoding over all leaves. Refinement and cell choice depend only on colors, so the
// tree of a relabeled structure is the relabeled tree and the least code is an invariant.
// Automorphisms discovered at equal leaves prune sibling subtrees in the same orbit of the
// pointwise stabilizer of the current path.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "fraisse/budget.hpp"
#include "fraisse/structure.hpp"

namespace fraisse {

/// Bytes identifying an isomorphism type within a fixed signature.
struct CanonicalCode {
    std::string bytes;

    friend bool operator==(const CanonicalCode&, const CanonicalCode&) = default;
    friend auto operator<=>(const CanonicalCode&, const CanonicalCode&) = default;

    [[nodiscard]] std::string hex() const {
        static constexpr char digits[] = "0123456789abcdef";
        std::string out;
        out.reserve(bytes.size() * 2);
        for (unsigned char c : bytes) {
            out += digits[c >> 4];
            out += digits[c & 0xf];
        }
        return out;
    }
};

struct CanonicalLabeling {
    CanonicalCode code;
    VertexMap label;                   // label[v] = canonical position of v
    std::vector<VertexMap> generators; // automorphisms met during the search (not necessarily generating)
};

namespace detail {

class Refiner {
public:
    explicit Refiner(const Structure& s) : s_(s), n_(s.size()) {
        for (std::size_t sym = 0; sym < s.signature().size(); ++sym) {
            const auto& tab = s.table(sym);
            for (std::uint64_t i = 0; i < tab.cells(); ++i)
                if (tab.test(i))
                    present_.push_back({static_cast<int>(sym), tab.tuple_at(i)});
        }
    }

    [[nodiscard]] int size() const { return n_; }

    /// Refines `colors` (ranks 0..k-1) to the coarsest equitable refinement. Returns the number of colors.
    int refine(std::vector<int>& colors) const {
        int count = distinct(colors);
        std::vector<std::vector<std::vector<int>>> records(static_cast<std::size_t>(n_));
        for (;;) {
            for (auto& r : records)
                r.clear();
            for (const auto& [sym, t] : present_) {
                for (std::size_t p = 0; p < t.size(); ++p) {
                    std::vector<int> rec;
                    rec.reserve(t.size() + 2);
                    rec.push_back(sym);
                    rec.push_back(static_cast<int>(p));
                    for (Vertex v : t)
                        rec.push_back(colors[static_cast<std::size_t>(v)]);
                    records[static_cast<std::size_t>(t[p])].push_back(std::move(rec));
                }
            }
            std::vector<std::vector<int>> keys(static_cast<std::size_t>(n_));
            for (int v = 0; v < n_; ++v) {
                auto& r = records[static_cast<std::size_t>(v)];
                std::sort(r.begin(), r.end());
                auto& k = keys[static_cast<std::size_t>(v)];
                k.push_back(colors[static_cast<std::size_t>(v)]);
                for (const auto& rec : r) {
                    k.push_back(static_cast<int>(rec.size()));
                    k.insert(k.end(), rec.begin(), rec.end());
                }
            }
            rank(keys, colors);
            const int next = distinct(colors);
            if (next == count)
                return count;
            count = next;
        }
    }

    [[nodiscard]] CanonicalCode leaf_code(const std::vector<int>& label) const {
        std::vector<Vertex> inverse(static_cast<std::size_t>(n_));
        for (int v = 0; v < n_; ++v)
            inverse[static_cast<std::size_t>(label[static_cast<std::size_t>(v)])] = v;
        CanonicalCode code;
        code.bytes.push_back(static_cast<char>(n_));
        for (std::size_t sym = 0; sym < s_.signature().size(); ++sym) {
            const auto& tab = s_.table(sym);
            const int r = tab.arity();
            Tuple old(static_cast<std::size_t>(r));
            unsigned char acc = 0;
            int nbits = 0;
            // Walk new tuples in lexicographic order via an odometer.
            Tuple fresh(static_cast<std::size_t>(r), 0);
            for (std::uint64_t i = 0; i < tab.cells(); ++i) {
                for (int k = 0; k < r; ++k)
                    old[static_cast<std::size_t>(k)] = inverse[static_cast<std::size_t>(fresh[static_cast<std::size_t>(k)])];
                acc = static_cast<unsigned char>((acc << 1) | (tab.test(old) ? 1 : 0));
                if (++nbits == 8) {
                    code.bytes.push_back(static_cast<char>(acc));
                    acc = 0;
                    nbits = 0;
                }
                for (int k = r - 1; k >= 0; --k) {
                    if (++fresh[static_cast<std::size_t>(k)] < n_)
                        break;
                    fresh[static_cast<std::size_t>(k)] = 0;
                }
            }
            if (nbits)
                code.bytes.push_back(static_cast<char>(acc << (8 - nbits)));
        }
        return code;
    }

    static int distinct(const std::vector<int>& colors) {
        int m = -1;
        for (int c : colors)
            m = std::max(m, c);
        return m + 1;
    }

    /// Cell to individualize: the lowest color with more than one vertex, or -1 when discrete.
    static int target_cell(const std::vector<int>& colors) {
        std::vector<int> counts(colors.size(), 0);
        for (int c : colors)
            ++counts[static_cast<std::size_t>(c)];
        for (std::size_t c = 0; c < counts.size(); ++c)
            if (counts[c] > 1)
                return static_cast<int>(c);
        return -1;
    }

    static std::vector<int> individualize(const std::vector<int>& colors, int cell, Vertex v) {
        auto out = colors;
        for (std::size_t u = 0; u < out.size(); ++u) {
            if (colors[u] > cell || (colors[u] == cell && static_cast<Vertex>(u) != v))
                ++out[u];
        }
        return out;
    }

    static void rank(const std::vector<std::vector<int>>& keys, std::vector<int>& colors) {
        std::vector<int> order(keys.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return keys[static_cast<std::size_t>(a)] < keys[static_cast<std::size_t>(b)];
        });
        int c = -1;
        for (std::size_t i = 0; i < order.size(); ++i) {
            if (i == 0 || keys[static_cast<std::size_t>(order[i])] != keys[static_cast<std::size_t>(order[i - 1])])
                ++c;
            colors[static_cast<std::size_t>(order[i])] = c;
        }
    }

    /// Initial coloring: unary relations are already captured by refinement; start uniform.
    [[nodiscard]] std::vector<int> unit_coloring() const { return std::vector<int>(static_cast<std::size_t>(n_), 0); }

private:
    struct Present {
        int symbol;
        Tuple tuple;
    };
    const Structure& s_;
    int n_;
    std::vector<Present> present_;
};

inline int find_root(std::vector<int>& parent, int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
        parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        x = parent[static_cast<std::size_t>(x)];
    }
    return x;
}

class CanonSearch {
public:
    CanonSearch(const Refiner& refiner, Budget* budget) : r_(refiner), budget_(budget) {}

    CanonicalLabeling run() {
        auto colors = r_.unit_coloring();
        std::vector<Vertex> path;
        descend(colors, path);
        CanonicalLabeling out;
        out.code = best_code_;
        out.label.assign(best_label_.begin(), best_label_.end());
        out.generators = generators_;
        return out;
    }

private:
    void descend(std::vector<int> colors, std::vector<Vertex>& path) {
        if (budget_)
            budget_->tick();
        r_.refine(colors);
        const int cell = Refiner::target_cell(colors);
        if (cell < 0) {
            leaf(colors);
            return;
        }
        std::vector<Vertex> explored;
        for (Vertex v = 0; v < r_.size(); ++v) {
            if (colors[static_cast<std::size_t>(v)] != cell)
                continue;
            if (!explored.empty() && equivalent_to_explored(v, explored, path))
                continue;
            path.push_back(v);
            descend(Refiner::individualize(colors, cell, v), path);
            path.pop_back();
            explored.push_back(v);
        }
    }

    bool equivalent_to_explored(Vertex v, const std::vector<Vertex>& explored, const std::vector<Vertex>& path) const {
        std::vector<int> parent(static_cast<std::size_t>(r_.size()));
        std::iota(parent.begin(), parent.end(), 0);
        bool any = false;
        for (const auto& g : generators_) {
            bool fixes = true;
            for (Vertex p : path)
                if (g[static_cast<std::size_t>(p)] != p) {
                    fixes = false;
                    break;
                }
            if (!fixes)
                continue;
            any = true;
            for (int x = 0; x < r_.size(); ++x) {
                const int a = find_root(parent, x);
                const int b = find_root(parent, g[static_cast<std::size_t>(x)]);
                if (a != b)
                    parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
            }
        }
        if (!any)
            return false;
        const int rv = find_root(parent, v);
        for (Vertex u : explored)
            if (find_root(parent, u) == rv)
                return true;
        return false;
    }

    void leaf(const std::vector<int>& label) {
        auto code = r_.leaf_code(label);
        if (best_label_.empty() || code < best_code_) {
            best_code_ = std::move(code);
            best_label_ = label;
            return;
        }
        if (code == best_code_) {
            // g = best^{-1} ∘ label is an automorphism.
            std::vector<Vertex> best_inverse(label.size());
            for (std::size_t v = 0; v < label.size(); ++v)
                best_inverse[static_cast<std::size_t>(best_label_[v])] = static_cast<Vertex>(v);
            VertexMap g(label.size());
            bool identity = true;
            for (std::size_t v = 0; v < label.size(); ++v) {
                g[v] = best_inverse[static_cast<std::size_t>(label[v])];
                identity = identity && g[v] == static_cast<Vertex>(v);
            }
            if (!identity)
                generators_.push_back(std::move(g));
        }
    }

    const Refiner& r_;
    Budget* budget_;
    CanonicalCode best_code_;
    std::vector<int> best_label_;
    std::vector<VertexMap> generators_;
};

} // namespace detail

inline CanonicalLabeling canonical_labeling(const Structure& s, Budget* budget = nullptr) {
    detail::Refiner refiner(s);
    return detail::CanonSearch(refiner, budget).run();
}

inline CanonicalCode canonical_form(const Structure& s, Budget* budget = nullptr) {
    return canonical_labeling(s, budget).code;
}

/// The canonical representative: `s` relabeled by its canonical labeling.
inline Structure canonical_structure(const Structure& s, Budget* budget = nullptr) {
    const auto lab = canonical_labeling(s, budget);
    return relabel(s, lab.label);
}

/// Visits every leaf labeling of the unpruned refinement tree.
template <class F>
void for_each_refinement_leaf(const Structure& s, F&& visit, Budget* budget = nullptr) {
    detail::Refiner refiner(s);
    auto rec = [&](auto&& self, std::vector<int> colors) -> void {
        if (budget)
            budget->tick();
        refiner.refine(colors);
        const int cell = detail::Refiner::target_cell(colors);
        if (cell < 0) {
            visit(refiner, colors);
            return;
        }
        for (Vertex v = 0; v < refiner.size(); ++v)
            if (colors[static_cast<std::size_t>(v)] == cell)
                self(self, detail::Refiner::individualize(colors, cell, v));
    };
    rec(rec, refiner.unit_coloring());
}

inline bool isomorphic(const Structure& a, const Structure& b) {
    return a.signature() == b.signature() && a.size() == b.size() && canonical_form(a) == canonical_form(b);
}

} // namespace fraisse
