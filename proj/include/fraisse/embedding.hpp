#pragma once

// Embedding test and enumeration: injective maps that preserve and reflect every relation.

#include <span>
#include <type_traits>
#include <vector>

#include "fraisse/budget.hpp"
#include "fraisse/structure.hpp"

namespace fraisse {

inline bool is_embedding(std::span<const Vertex> f, const Structure& a, const Structure& b) {
    if (!(a.signature() == b.signature()))
        return false;
    if (static_cast<int>(f.size()) != a.size())
        return false;
    std::vector<bool> used(static_cast<std::size_t>(b.size()), false);
    for (Vertex v : f) {
        if (v < 0 || v >= b.size() || used[static_cast<std::size_t>(v)])
            return false;
        used[static_cast<std::size_t>(v)] = true;
    }
    for (std::size_t sym = 0; sym < a.signature().size(); ++sym) {
        const auto& ta = a.table(sym);
        Tuple img(static_cast<std::size_t>(ta.arity()));
        for (std::uint64_t i = 0; i < ta.cells(); ++i) {
            const auto t = ta.tuple_at(i);
            for (std::size_t k = 0; k < t.size(); ++k)
                img[k] = f[static_cast<std::size_t>(t[k])];
            if (ta.test(i) != b.holds(sym, img))
                return false;
        }
    }
    return true;
}

inline bool is_embedding(const Embedding& e, const Structure& a, const Structure& b) {
    return is_embedding(std::span<const Vertex>(e.map), a, b);
}

namespace detail {

/// Per source vertex i: the source tuples over {0..i} that contain i, with their truth values.
struct EmbeddingPlan {
    struct Check {
        std::size_t symbol;
        Tuple tuple;
        bool value;
    };
    std::vector<std::vector<Check>> steps;

    explicit EmbeddingPlan(const Structure& a) : steps(static_cast<std::size_t>(a.size())) {
        for (std::size_t sym = 0; sym < a.signature().size(); ++sym) {
            const auto& tab = a.table(sym);
            for (std::uint64_t idx = 0; idx < tab.cells(); ++idx) {
                auto t = tab.tuple_at(idx);
                Vertex top = 0;
                for (Vertex v : t)
                    top = std::max(top, v);
                steps[static_cast<std::size_t>(top)].push_back({sym, std::move(t), tab.test(idx)});
            }
        }
    }
};

template <class F>
bool embed_search(const Structure& b, const EmbeddingPlan& plan, std::size_t depth, VertexMap& map,
                  std::vector<bool>& used, F& visit, Budget* budget) {
    if (depth == plan.steps.size()) {
        Embedding e{map};
        if constexpr (std::is_same_v<std::invoke_result_t<F&, const Embedding&>, bool>)
            return visit(e);
        else {
            visit(e);
            return true;
        }
    }
    Tuple img;
    for (Vertex x = 0; x < b.size(); ++x) {
        if (used[static_cast<std::size_t>(x)])
            continue;
        if (budget)
            budget->tick();
        map[depth] = x;
        bool ok = true;
        for (const auto& c : plan.steps[depth]) {
            img.resize(c.tuple.size());
            for (std::size_t k = 0; k < c.tuple.size(); ++k)
                img[k] = map[static_cast<std::size_t>(c.tuple[k])];
            if (b.holds(c.symbol, img) != c.value) {
                ok = false;
                break;
            }
        }
        if (!ok)
            continue;
        used[static_cast<std::size_t>(x)] = true;
        const bool go_on = embed_search(b, plan, depth + 1, map, used, visit, budget);
        used[static_cast<std::size_t>(x)] = false;
        if (!go_on)
            return false;
    }
    return true;
}

inline void require_same_signature(const Structure& a, const Structure& b, const char* op) {
    if (!(a.signature() == b.signature()))
        throw InputError(std::string(op) + ": signature mismatch");
}

} // namespace detail

/// Visits every embedding of `a` into `b` in lexicographic order of the map.
/// The visitor may return false to stop; the function returns false iff stopped early.
template <class F>
bool for_each_embedding(const Structure& a, const Structure& b, F&& visit, Budget* budget = nullptr) {
    detail::require_same_signature(a, b, "embeddings");
    if (a.size() > b.size())
        return true;
    detail::EmbeddingPlan plan(a);
    VertexMap map(static_cast<std::size_t>(a.size()), -1);
    std::vector<bool> used(static_cast<std::size_t>(b.size()), false);
    return detail::embed_search(b, plan, 0, map, used, visit, budget);
}

inline std::vector<Embedding> embeddings(const Structure& a, const Structure& b, Budget* budget = nullptr) {
    std::vector<Embedding> out;
    for_each_embedding(a, b, [&](const Embedding& e) { out.push_back(e); }, budget);
    return out;
}

inline bool embeds(const Structure& a, const Structure& b, Budget* budget = nullptr) {
    bool found = false;
    for_each_embedding(a, b, [&](const Embedding&) { found = true; return false; }, budget);
    return found;
}

} // namespace fraisse
