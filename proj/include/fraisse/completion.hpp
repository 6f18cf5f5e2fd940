#pragma once

// Completion of partially specified relation tables to members of an age.
//
// Cells are grouped into decision variables: for an axiomatized binary symbol the pair
// {(x,y),(y,x)} is one variable whose admissible joint values respect symmetry,
// antisymmetry and totality; loops and all other cells are single bits. Variables are
// assigned in order of their largest vertex, absent before present, so the first completion
// adds as few tuples as possible. Transitivity is checked locally after every assignment and
// forbidden substructures whenever a vertex prefix becomes fully determined.

#include <cstdint>
#include <numeric>
#include <optional>
#include <type_traits>
#include <vector>

#include "fraisse/age.hpp"
#include "fraisse/budget.hpp"
#include "fraisse/structure.hpp"

namespace fraisse {

class PartialStructure {
public:
    static constexpr std::int8_t kFree = -1;

    PartialStructure(Signature signature, int size) : signature_(std::move(signature)), size_(size) {
        if (size_ < 1 || size_ > kMaxVertices)
            throw InputError("partial structure: bad size");
        for (const auto& s : signature_)
            cells_.emplace_back(detail::table_size(size_, s.arity), kFree);
    }

    [[nodiscard]] const Signature& signature() const { return signature_; }
    [[nodiscard]] int size() const { return size_; }

    [[nodiscard]] std::uint64_t index(std::span<const Vertex> t) const {
        std::uint64_t idx = 0;
        for (Vertex v : t)
            idx = idx * static_cast<std::uint64_t>(size_) + static_cast<std::uint64_t>(v);
        return idx;
    }

    [[nodiscard]] std::int8_t get(std::size_t sym, std::uint64_t idx) const { return cells_[sym][idx]; }
    [[nodiscard]] std::int8_t get(std::size_t sym, std::initializer_list<Vertex> t) const {
        return cells_[sym][index(std::span<const Vertex>(t.begin(), t.size()))];
    }
    [[nodiscard]] std::uint64_t cells(std::size_t sym) const { return cells_[sym].size(); }

    /// Fixes a cell; returns false on a conflicting earlier value.
    bool fix(std::size_t sym, std::uint64_t idx, bool value) {
        auto& c = cells_[sym][idx];
        const std::int8_t v = value ? 1 : 0;
        if (c != kFree && c != v)
            return false;
        c = v;
        return true;
    }
    bool fix(std::size_t sym, std::span<const Vertex> t, bool value) { return fix(sym, index(t), value); }

    void set_raw(std::size_t sym, std::uint64_t idx, std::int8_t v) { cells_[sym][idx] = v; }

    /// Copies every tuple value of `part` through `map` (part vertex -> this vertex).
    bool fix_part(const Structure& part, std::span<const Vertex> map) {
        for (std::size_t sym = 0; sym < signature_.size(); ++sym) {
            const auto& tab = part.table(sym);
            Tuple img(static_cast<std::size_t>(tab.arity()));
            for (std::uint64_t i = 0; i < tab.cells(); ++i) {
                const auto t = tab.tuple_at(i);
                for (std::size_t k = 0; k < t.size(); ++k)
                    img[k] = map[static_cast<std::size_t>(t[k])];
                if (!fix(sym, img, tab.test(i)))
                    return false;
            }
        }
        return true;
    }

    /// Completion with every free cell absent.
    [[nodiscard]] Structure freeze_absent() const {
        std::vector<RelationTable> tables;
        for (std::size_t sym = 0; sym < signature_.size(); ++sym) {
            RelationTable t(size_, signature_[sym].arity);
            for (std::uint64_t i = 0; i < cells_[sym].size(); ++i)
                t.set(i, cells_[sym][i] == 1);
            tables.push_back(std::move(t));
        }
        return Structure::from_tables(signature_, size_, std::move(tables));
    }

private:
    Signature signature_;
    int size_;
    std::vector<std::vector<std::int8_t>> cells_;
};

namespace detail {

class CompletionSearch {
public:
    CompletionSearch(const AgeSpec& spec, PartialStructure partial, Budget* budget)
        : spec_(spec), p_(std::move(partial)), budget_(budget) {}

    template <class F>
    bool run(F& visit) {
        if (!build_variables())
            return true;
        return descend(0, -1, visit);
    }

private:
    struct Variable {
        std::size_t symbol;
        std::vector<std::uint64_t> cells;
        std::vector<std::vector<std::int8_t>> options;
        int top = 0; // largest vertex touched
        Vertex x = 0, y = 0; // for binary variables
        bool binary = false;
    };

    bool build_variables() {
        const int n = p_.size();
        for (std::size_t sym = 0; sym < spec_.signature().size(); ++sym) {
            const int r = spec_.signature()[sym].arity;
            const auto& ax = spec_.axioms(sym);
            if (r == 2 && ax.any()) {
                for (Vertex x = 0; x < n; ++x) {
                    const auto loop = p_.index(std::vector<Vertex>{x, x});
                    if (ax.irreflexive && !p_.fix(sym, loop, false))
                        return false;
                    if (p_.get(sym, loop) == PartialStructure::kFree)
                        add_single(sym, loop, x, x, true);
                }
                for (Vertex y = 1; y < n; ++y)
                    for (Vertex x = 0; x < y; ++x) {
                        Variable v;
                        v.symbol = sym;
                        v.binary = true;
                        v.x = x;
                        v.y = y;
                        v.top = y;
                        v.cells = {p_.index(std::vector<Vertex>{x, y}), p_.index(std::vector<Vertex>{y, x})};
                        for (std::int8_t a = 0; a <= 1; ++a)
                            for (std::int8_t b = 0; b <= 1; ++b) {
                                if (ax.symmetric && a != b)
                                    continue;
                                if (ax.antisymmetric && a && b)
                                    continue;
                                if (ax.total && !a && !b)
                                    continue;
                                const auto ca = p_.get(sym, v.cells[0]);
                                const auto cb = p_.get(sym, v.cells[1]);
                                if ((ca != PartialStructure::kFree && ca != a) ||
                                    (cb != PartialStructure::kFree && cb != b))
                                    continue;
                                v.options.push_back({a, b});
                            }
                        if (v.options.empty())
                            return false;
                        if (v.options.size() == 1) {
                            p_.fix(sym, v.cells[0], v.options[0][0] != 0);
                            p_.fix(sym, v.cells[1], v.options[0][1] != 0);
                            continue;
                        }
                        vars_.push_back(std::move(v));
                    }
            } else {
                for (std::uint64_t i = 0; i < p_.cells(sym); ++i) {
                    if (p_.get(sym, i) != PartialStructure::kFree)
                        continue;
                    const auto t = decode_tuple(i, n, r);
                    Vertex top = 0;
                    for (Vertex u : t)
                        top = std::max(top, u);
                    add_single(sym, i, t[0], t.size() > 1 ? t[1] : t[0], r == 2);
                    vars_.back().top = top;
                }
            }
        }
        std::stable_sort(vars_.begin(), vars_.end(), [](const Variable& a, const Variable& b) { return a.top < b.top; });
        // Forced cells may already violate transitivity.
        for (std::size_t sym = 0; sym < spec_.signature().size(); ++sym)
            if (spec_.signature()[sym].arity == 2 && spec_.axioms(sym).transitive && !transitive_ok_all(sym))
                return false;
        return true;
    }

    void add_single(std::size_t sym, std::uint64_t idx, Vertex x, Vertex y, bool binary) {
        Variable v;
        v.symbol = sym;
        v.cells = {idx};
        v.options = {{0}, {1}};
        v.top = std::max(x, y);
        v.x = x;
        v.y = y;
        v.binary = binary;
        vars_.push_back(std::move(v));
    }

    [[nodiscard]] std::int8_t rel(std::size_t sym, Vertex a, Vertex b) const {
        return p_.get(sym, static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(p_.size()) +
                               static_cast<std::uint64_t>(b));
    }

    // Every fully determined triple around cell (a,b) satisfies transitivity.
    [[nodiscard]] bool transitive_ok_cell(std::size_t sym, Vertex a, Vertex b) const {
        const auto ab = rel(sym, a, b);
        if (ab == PartialStructure::kFree)
            return true;
        for (Vertex z = 0; z < p_.size(); ++z) {
            if (ab == 1) {
                if (rel(sym, b, z) == 1 && rel(sym, a, z) == 0)
                    return false;
                if (rel(sym, z, a) == 1 && rel(sym, z, b) == 0)
                    return false;
            } else if (rel(sym, a, z) == 1 && rel(sym, z, b) == 1) {
                return false;
            }
        }
        return true;
    }

    [[nodiscard]] bool transitive_ok_all(std::size_t sym) const {
        for (Vertex a = 0; a < p_.size(); ++a)
            for (Vertex b = 0; b < p_.size(); ++b)
                if (!transitive_ok_cell(sym, a, b))
                    return false;
        return true;
    }

    // All cells within {0..k} are determined: no forbidden structure may embed there.
    [[nodiscard]] bool prefix_ok(int k) const {
        if (spec_.forbidden().empty())
            return true;
        std::vector<Vertex> vs(static_cast<std::size_t>(k + 1));
        std::iota(vs.begin(), vs.end(), 0);
        const auto sub = induced_substructure(p_.freeze_absent(), vs);
        for (const auto& f : spec_.forbidden())
            if (f.size() <= sub.size() && embeds(f, sub))
                return false;
        return true;
    }

    template <class F>
    bool descend(std::size_t i, int checked, F& visit) {
        if (budget_)
            budget_->tick();
        // Every vertex prefix below the next variable's top is fully determined.
        const int limit = i < vars_.size() ? vars_[i].top - 1 : p_.size() - 1;
        for (int k = checked + 1; k <= limit; ++k)
            if (!prefix_ok(k))
                return true;
        checked = std::max(checked, limit);
        if (i == vars_.size()) {
            auto s = p_.freeze_absent();
            if (!member(spec_, s))
                return true;
            if constexpr (std::is_same_v<std::invoke_result_t<F&, const Structure&>, bool>)
                return visit(s);
            else {
                visit(s);
                return true;
            }
        }
        const auto& v = vars_[i];
        for (const auto& opt : v.options) {
            for (std::size_t c = 0; c < v.cells.size(); ++c)
                p_.set_raw(v.symbol, v.cells[c], opt[c]);
            bool ok = true;
            if (v.binary && spec_.axioms(v.symbol).transitive)
                ok = transitive_ok_cell(v.symbol, v.x, v.y) && transitive_ok_cell(v.symbol, v.y, v.x);
            if (ok && !descend(i + 1, checked, visit)) {
                for (auto c : v.cells)
                    p_.set_raw(v.symbol, c, PartialStructure::kFree);
                return false;
            }
        }
        for (auto c : v.cells)
            p_.set_raw(v.symbol, c, PartialStructure::kFree);
        return true;
    }

    const AgeSpec& spec_;
    PartialStructure p_;
    Budget* budget_;
    std::vector<Variable> vars_;
};

} // namespace detail

/// Visits every completion of `partial` that is a member of `spec`. Returns false iff stopped early.
template <class F>
bool for_each_completion(const AgeSpec& spec, PartialStructure partial, F&& visit, Budget* budget = nullptr) {
    if (!(partial.signature() == spec.signature()))
        throw InputError("completion: signature mismatch");
    detail::CompletionSearch search(spec, std::move(partial), budget);
    return search.run(visit);
}

inline std::optional<Structure> first_completion(const AgeSpec& spec, PartialStructure partial,
                                                 Budget* budget = nullptr) {
    std::optional<Structure> out;
    for_each_completion(spec, std::move(partial), [&](const Structure& s) {
        out = s;
        return false;
    }, budget);
    return out;
}

} // namespace fraisse
