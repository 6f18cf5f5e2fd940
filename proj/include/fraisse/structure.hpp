#pragma once

// Finite relational structures over the vertex set 0..n-1.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fraisse {

/// Malformed or inconsistent input (bad files, arity mismatches, bad maps).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A bounded search ran out of its node or time budget.
class ResourceLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kMaxVertices = 64;
inline constexpr int kMaxArity = 6;
// Dense relation tables are capped at this many bits per symbol.
inline constexpr std::uint64_t kMaxTableBits = std::uint64_t{1} << 24;

using Vertex = int;
using Tuple = std::vector<Vertex>;
using VertexMap = std::vector<Vertex>;

struct Symbol {
    std::string name;
    int arity = 0;

    friend bool operator==(const Symbol&, const Symbol&) = default;
    friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

class Signature {
public:
    Signature() = default;
    Signature(std::initializer_list<Symbol> symbols) : Signature(std::vector<Symbol>(symbols)) {}

    explicit Signature(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
        for (std::size_t i = 0; i < symbols_.size(); ++i) {
            const auto& s = symbols_[i];
            if (s.name.empty())
                throw InputError("signature: empty symbol name");
            if (s.arity < 1 || s.arity > kMaxArity)
                throw InputError("signature: symbol '" + s.name + "' has unsupported arity " +
                                 std::to_string(s.arity));
            for (std::size_t j = 0; j < i; ++j)
                if (symbols_[j].name == s.name)
                    throw InputError("signature: duplicate symbol '" + s.name + "'");
        }
    }

    [[nodiscard]] std::size_t size() const { return symbols_.size(); }
    [[nodiscard]] bool empty() const { return symbols_.empty(); }
    [[nodiscard]] const Symbol& operator[](std::size_t i) const { return symbols_[i]; }
    [[nodiscard]] const std::vector<Symbol>& symbols() const { return symbols_; }
    [[nodiscard]] auto begin() const { return symbols_.begin(); }
    [[nodiscard]] auto end() const { return symbols_.end(); }

    /// Index of the named symbol, or -1.
    [[nodiscard]] int find(const std::string& name) const {
        for (std::size_t i = 0; i < symbols_.size(); ++i)
            if (symbols_[i].name == name)
                return static_cast<int>(i);
        return -1;
    }

    [[nodiscard]] int max_arity() const {
        int r = 0;
        for (const auto& s : symbols_)
            r = std::max(r, s.arity);
        return r;
    }

    /// Copy of this signature with extra symbols appended.
    [[nodiscard]] Signature extended(const std::vector<Symbol>& extra) const {
        auto all = symbols_;
        all.insert(all.end(), extra.begin(), extra.end());
        return Signature(std::move(all));
    }

    friend bool operator==(const Signature&, const Signature&) = default;

private:
    std::vector<Symbol> symbols_;
};

namespace detail {

inline std::uint64_t table_size(int n, int arity) {
    std::uint64_t s = 1;
    for (int i = 0; i < arity; ++i)
        s *= static_cast<std::uint64_t>(n);
    return s;
}

inline Tuple decode_tuple(std::uint64_t idx, int n, int arity) {
    Tuple t(static_cast<std::size_t>(arity));
    for (int i = arity - 1; i >= 0; --i) {
        t[static_cast<std::size_t>(i)] = static_cast<Vertex>(idx % static_cast<std::uint64_t>(n));
        idx /= static_cast<std::uint64_t>(n);
    }
    return t;
}

} // namespace detail

/// Dense bit table of one relation: tuple (v0,..,v_{r-1}) lives at index sum v_i n^(r-1-i).
/// For binary symbols the rows are exactly per-vertex out-adjacency bitsets.
class RelationTable {
public:
    RelationTable() = default;
    RelationTable(int n, int arity) : n_(n), arity_(arity), bits_(detail::table_size(n, arity)) {}

    [[nodiscard]] int arity() const { return arity_; }
    [[nodiscard]] std::uint64_t cells() const { return bits_.size(); }

    [[nodiscard]] std::uint64_t index(std::span<const Vertex> t) const {
        std::uint64_t idx = 0;
        for (Vertex v : t)
            idx = idx * static_cast<std::uint64_t>(n_) + static_cast<std::uint64_t>(v);
        return idx;
    }
    [[nodiscard]] bool test(std::uint64_t idx) const { return bits_[idx] != 0; }
    [[nodiscard]] bool test(std::span<const Vertex> t) const { return bits_[index(t)] != 0; }
    void set(std::uint64_t idx, bool value) { bits_[idx] = value ? 1 : 0; }
    void set(std::span<const Vertex> t, bool value) { set(index(t), value); }

    [[nodiscard]] Tuple tuple_at(std::uint64_t idx) const { return detail::decode_tuple(idx, n_, arity_); }

    friend bool operator==(const RelationTable&, const RelationTable&) = default;

private:
    int n_ = 0;
    int arity_ = 0;
    std::vector<std::uint8_t> bits_;
};

/// Immutable finite structure. Construct through the tuple-list constructor or from tables.
class Structure {
public:
    Structure() = default;

    Structure(Signature signature, int size, const std::vector<std::vector<Tuple>>& relations)
        : signature_(std::move(signature)), size_(size) {
        check_size();
        if (relations.size() != signature_.size())
            throw InputError("structure: expected " + std::to_string(signature_.size()) +
                             " relations, got " + std::to_string(relations.size()));
        allocate();
        for (std::size_t s = 0; s < relations.size(); ++s) {
            for (const auto& t : relations[s]) {
                if (static_cast<int>(t.size()) != signature_[s].arity)
                    throw InputError("structure: tuple of length " + std::to_string(t.size()) +
                                     " for symbol '" + signature_[s].name + "' of arity " +
                                     std::to_string(signature_[s].arity));
                for (Vertex v : t)
                    if (v < 0 || v >= size_)
                        throw InputError("structure: vertex " + std::to_string(v) +
                                         " out of range for size " + std::to_string(size_));
                tables_[s].set(t, true);
            }
        }
    }

    /// Takes ownership of prebuilt tables; used by the search engines.
    static Structure from_tables(Signature signature, int size, std::vector<RelationTable> tables) {
        Structure s;
        s.signature_ = std::move(signature);
        s.size_ = size;
        s.check_size();
        if (tables.size() != s.signature_.size())
            throw InputError("structure: table count does not match signature");
        for (std::size_t i = 0; i < tables.size(); ++i)
            if (tables[i].arity() != s.signature_[i].arity ||
                tables[i].cells() != detail::table_size(size, s.signature_[i].arity))
                throw InputError("structure: table shape mismatch for '" + s.signature_[i].name + "'");
        s.tables_ = std::move(tables);
        return s;
    }

    [[nodiscard]] const Signature& signature() const { return signature_; }
    [[nodiscard]] int size() const { return size_; }
    [[nodiscard]] const RelationTable& table(std::size_t symbol) const { return tables_[symbol]; }
    [[nodiscard]] const std::vector<RelationTable>& tables() const { return tables_; }

    [[nodiscard]] bool holds(std::size_t symbol, std::span<const Vertex> t) const {
        return tables_[symbol].test(t);
    }
    [[nodiscard]] bool holds(std::size_t symbol, std::initializer_list<Vertex> t) const {
        return tables_[symbol].test(std::span<const Vertex>(t.begin(), t.size()));
    }

    /// Tuples of one relation in lexicographic order.
    [[nodiscard]] std::vector<Tuple> tuples(std::size_t symbol) const {
        std::vector<Tuple> out;
        const auto& tab = tables_[symbol];
        for (std::uint64_t i = 0; i < tab.cells(); ++i)
            if (tab.test(i))
                out.push_back(tab.tuple_at(i));
        return out;
    }

    [[nodiscard]] std::size_t tuple_count() const {
        std::size_t c = 0;
        for (const auto& tab : tables_)
            for (std::uint64_t i = 0; i < tab.cells(); ++i)
                c += tab.test(i) ? 1 : 0;
        return c;
    }

    /// Same structure with extra unary symbols appended, marking the given vertex sets.
    [[nodiscard]] Structure with_marks(const std::vector<std::string>& names,
                                       const std::vector<std::vector<Vertex>>& marked) const {
        std::vector<Symbol> extra;
        extra.reserve(names.size());
        for (const auto& n : names)
            extra.push_back({n, 1});
        auto tables = tables_;
        for (const auto& vs : marked) {
            RelationTable t(size_, 1);
            for (Vertex v : vs)
                t.set(static_cast<std::uint64_t>(v), true);
            tables.push_back(std::move(t));
        }
        return from_tables(signature_.extended(extra), size_, std::move(tables));
    }

    friend bool operator==(const Structure&, const Structure&) = default;

private:
    void check_size() const {
        if (size_ < 1)
            throw InputError("structure: size must be at least 1");
        if (size_ > kMaxVertices)
            throw InputError("structure: size " + std::to_string(size_) + " exceeds the limit of " +
                             std::to_string(kMaxVertices));
        for (const auto& s : signature_)
            if (detail::table_size(size_, s.arity) > kMaxTableBits)
                throw InputError("structure: relation '" + s.name + "' too large to tabulate");
    }

    void allocate() {
        tables_.clear();
        for (const auto& s : signature_)
            tables_.emplace_back(size_, s.arity);
    }

    Signature signature_;
    int size_ = 0;
    std::vector<RelationTable> tables_;
};

/// Injective vertex assignment from a source structure into a target; sources/targets are contextual.
struct Embedding {
    VertexMap map;

    [[nodiscard]] std::size_t size() const { return map.size(); }
    [[nodiscard]] Vertex operator[](std::size_t i) const { return map[i]; }

    friend bool operator==(const Embedding&, const Embedding&) = default;
    friend auto operator<=>(const Embedding&, const Embedding&) = default;
};

/// (outer ∘ inner)(v) = outer(inner(v)).
inline Embedding compose(const Embedding& outer, const Embedding& inner) {
    Embedding e;
    e.map.reserve(inner.size());
    for (Vertex v : inner.map)
        e.map.push_back(outer.map[static_cast<std::size_t>(v)]);
    return e;
}

inline std::vector<Vertex> image(const Embedding& e) {
    auto v = e.map;
    std::sort(v.begin(), v.end());
    return v;
}

/// Substructure induced on `vertices`; vertex i of the result is vertices[i].
inline Structure induced_substructure(const Structure& s, std::span<const Vertex> vertices) {
    if (vertices.empty())
        throw InputError("induced_substructure: empty vertex set");
    std::vector<bool> seen(static_cast<std::size_t>(s.size()), false);
    for (Vertex v : vertices) {
        if (v < 0 || v >= s.size())
            throw InputError("induced_substructure: vertex " + std::to_string(v) + " out of range");
        if (seen[static_cast<std::size_t>(v)])
            throw InputError("induced_substructure: repeated vertex " + std::to_string(v));
        seen[static_cast<std::size_t>(v)] = true;
    }
    const int m = static_cast<int>(vertices.size());
    std::vector<RelationTable> tables;
    for (std::size_t sym = 0; sym < s.signature().size(); ++sym) {
        const int r = s.signature()[sym].arity;
        RelationTable t(m, r);
        Tuple local(static_cast<std::size_t>(r)), global(static_cast<std::size_t>(r));
        for (std::uint64_t i = 0; i < t.cells(); ++i) {
            local = t.tuple_at(i);
            for (int k = 0; k < r; ++k)
                global[static_cast<std::size_t>(k)] = vertices[static_cast<std::size_t>(local[static_cast<std::size_t>(k)])];
            if (s.holds(sym, global))
                t.set(i, true);
        }
        tables.push_back(std::move(t));
    }
    return Structure::from_tables(s.signature(), m, std::move(tables));
}

inline Structure induced_substructure(const Structure& s, std::initializer_list<Vertex> vertices) {
    return induced_substructure(s, std::span<const Vertex>(vertices.begin(), vertices.size()));
}

/// Relabel by a permutation: vertex v of `s` becomes perm[v].
inline Structure relabel(const Structure& s, std::span<const Vertex> perm) {
    std::vector<RelationTable> tables;
    for (std::size_t sym = 0; sym < s.signature().size(); ++sym) {
        const auto& src = s.table(sym);
        RelationTable t(s.size(), src.arity());
        for (std::uint64_t i = 0; i < src.cells(); ++i) {
            if (!src.test(i))
                continue;
            auto tup = src.tuple_at(i);
            for (auto& v : tup)
                v = perm[static_cast<std::size_t>(v)];
            t.set(tup, true);
        }
        tables.push_back(std::move(t));
    }
    return Structure::from_tables(s.signature(), s.size(), std::move(tables));
}

// Small constructors for the running examples.
namespace make {

inline Signature graph_signature() { return Signature{{"edge", 2}}; }
inline Signature order_signature() { return Signature{{"lt", 2}}; }

inline Structure pure_set(int n) { return Structure(Signature{}, n, {}); }

inline Structure chain(int n) {
    std::vector<Tuple> lt;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            lt.push_back({i, j});
    return Structure(order_signature(), n, {lt});
}

inline Structure graph(int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<Tuple> e;
    for (auto [u, v] : edges) {
        e.push_back({u, v});
        e.push_back({v, u});
    }
    return Structure(graph_signature(), n, {e});
}

inline Structure complete_graph(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            e.emplace_back(i, j);
    return graph(n, e);
}

inline Structure path(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; ++i)
        e.emplace_back(i, i + 1);
    return graph(n, e);
}

inline Structure cycle(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i)
        e.emplace_back(i, (i + 1) % n);
    return graph(n, e);
}

} // namespace make

} // namespace fraisse
