#pragma once

// Depth-bounded search for unstable (A,Z)-sequences: a_0..a_{d-1}, z_0..z_{d-1} in one host
// with [a_m, z_n] = tau_lt whenever m < n and [a_m, z_n] = tau_gt whenever m > n.
//
// For every ordered pair of distinct patterns the parts are placed in the order
// a_0, z_0, a_1, z_1, ...; each placement chooses host vertices (fresh first) and is checked
// against the prescribed identifications and tuples of every constrained pair already placed.
// Remaining tuples are completed inside the age.

#include <optional>
#include <vector>

#include "fraisse/age.hpp"
#include "fraisse/budget.hpp"
#include "fraisse/completion.hpp"
#include "fraisse/patterns.hpp"

namespace fraisse {

struct UnstableWitness {
    int depth = 0;
    Structure host;
    std::vector<Embedding> a_parts;
    std::vector<Embedding> z_parts;
    PatternCode tau_lt;
    PatternCode tau_gt;
};

/// Re-checks every constraint of a witness through pattern_in alone.
inline bool verify_unstable_witness(const AgeSpec& spec, const Structure& a, const Structure& z,
                                    const UnstableWitness& w) {
    if (w.depth < 2 || static_cast<int>(w.a_parts.size()) != w.depth || static_cast<int>(w.z_parts.size()) != w.depth)
        return false;
    if (w.tau_lt == w.tau_gt)
        return false;
    if (!(w.host.signature() == spec.signature()) || !member(spec, w.host))
        return false;
    for (int m = 0; m < w.depth; ++m) {
        if (!is_embedding(w.a_parts[static_cast<std::size_t>(m)], a, w.host) ||
            !is_embedding(w.z_parts[static_cast<std::size_t>(m)], z, w.host))
            return false;
    }
    for (int m = 0; m < w.depth; ++m)
        for (int n = 0; n < w.depth; ++n) {
            if (m == n)
                continue;
            const auto code = pattern_in(w.host, w.a_parts[static_cast<std::size_t>(m)], w.z_parts[static_cast<std::size_t>(n)]);
            if (code != (m < n ? w.tau_lt : w.tau_gt))
                return false;
        }
    return true;
}

/// Drops trailing parts; a witness at depth d restricts to one at every depth 2..d.
inline UnstableWitness truncate_witness(const UnstableWitness& w, int depth) {
    if (depth < 2 || depth > w.depth)
        throw InputError("truncate_witness: depth out of range");
    UnstableWitness out = w;
    out.depth = depth;
    out.a_parts.resize(static_cast<std::size_t>(depth));
    out.z_parts.resize(static_cast<std::size_t>(depth));
    return out;
}

struct StabilityReport {
    bool stable = false; // no witness up to depth within hosts of at most max_host vertices
    int depth = 0;
    int max_host = 0;
    std::size_t patterns = 0;
    std::size_t pairs_tried = 0;
    std::uint64_t nodes = 0;
    std::optional<UnstableWitness> witness;
};

namespace detail {

// A pattern with its a/z identification table and tuples in terms of part positions.
struct PatternShape {
    PatternCode code;
    std::vector<std::vector<bool>> equal; // equal[p][q]: a-position p and z-position q coincide
    struct Cell {
        std::size_t symbol;
        // entries: (is_z, position)
        std::vector<std::pair<bool, int>> entries;
        bool value;
    };
    std::vector<Cell> cells; // every tuple over the union, addressed through part positions
};

inline PatternShape shape_of(const PatternEntry& e) {
    PatternShape s;
    s.code = e.code;
    const auto& host = e.witness.host;
    const auto& a = e.witness.parts[0];
    const auto& z = e.witness.parts[1];
    s.equal.assign(a.size(), std::vector<bool>(z.size(), false));
    for (std::size_t p = 0; p < a.size(); ++p)
        for (std::size_t q = 0; q < z.size(); ++q)
            s.equal[p][q] = a[p] == z[q];
    std::vector<std::pair<bool, int>> address(static_cast<std::size_t>(host.size()), {false, -1});
    for (std::size_t q = 0; q < z.size(); ++q)
        address[static_cast<std::size_t>(z[q])] = {true, static_cast<int>(q)};
    for (std::size_t p = 0; p < a.size(); ++p)
        address[static_cast<std::size_t>(a[p])] = {false, static_cast<int>(p)};
    for (std::size_t sym = 0; sym < host.signature().size(); ++sym) {
        const auto& tab = host.table(sym);
        for (std::uint64_t i = 0; i < tab.cells(); ++i) {
            PatternShape::Cell c{sym, {}, tab.test(i)};
            for (Vertex v : tab.tuple_at(i))
                c.entries.push_back(address[static_cast<std::size_t>(v)]);
            s.cells.push_back(std::move(c));
        }
    }
    return s;
}

class UnstableSearch {
public:
    UnstableSearch(const AgeSpec& spec, const Structure& a, const Structure& z, int depth, int max_host,
                   const PatternShape& lt, const PatternShape& gt, Budget* budget)
        : spec_(spec), a_(a), z_(z), depth_(depth), max_host_(max_host), lt_(lt), gt_(gt), budget_(budget),
          work_(spec.signature(), max_host) {
        a_maps_.assign(static_cast<std::size_t>(depth), VertexMap(static_cast<std::size_t>(a.size()), -1));
        z_maps_.assign(static_cast<std::size_t>(depth), VertexMap(static_cast<std::size_t>(z.size()), -1));
    }

    std::optional<UnstableWitness> run() {
        place_part(0);
        return found_;
    }

private:
    // Part k: even k is a_{k/2}, odd k is z_{k/2}.
    [[nodiscard]] bool is_z(int k) const { return k % 2 == 1; }
    VertexMap& map_of(int k) { return is_z(k) ? z_maps_[static_cast<std::size_t>(k / 2)] : a_maps_[static_cast<std::size_t>(k / 2)]; }

    // Constraint of a pair (a_m, z_n), or nullptr on the diagonal.
    [[nodiscard]] const PatternShape* constraint(int m, int n) const {
        if (m == n)
            return nullptr;
        return m < n ? &lt_ : &gt_;
    }

    bool place_part(int k) {
        if (k == 2 * depth_)
            return finish();
        return place_position(k, 0);
    }

    bool place_position(int k, int p) {
        auto& map = map_of(k);
        if (p == static_cast<int>(map.size()))
            return fix_part_and_continue(k);
        if (budget_)
            budget_->tick();
        auto attempt = [&](Vertex x) -> bool {
            for (int q = 0; q < p; ++q)
                if (map[static_cast<std::size_t>(q)] == x)
                    return false;
            map[static_cast<std::size_t>(p)] = x;
            const bool fresh = x == host_size_;
            if (fresh)
                ++host_size_;
            bool stop = false;
            if (identification_ok(k, p))
                stop = place_position(k, p + 1);
            if (fresh)
                --host_size_;
            map[static_cast<std::size_t>(p)] = -1;
            return stop;
        };
        if (host_size_ < max_host_ && attempt(host_size_))
            return true;
        for (Vertex x = 0; x < host_size_; ++x)
            if (attempt(x))
                return true;
        return false;
    }

    // Position p of part k against every fully placed opposite part with a constraint.
    bool identification_ok(int k, int p) {
        const int idx = k / 2;
        const Vertex x = map_of(k)[static_cast<std::size_t>(p)];
        const int placed_opposite = is_z(k) ? idx + 1 : idx; // a_0..a_idx placed before z_idx; z_0..z_{idx-1} before a_idx
        for (int o = 0; o < placed_opposite; ++o) {
            const int m = is_z(k) ? o : idx;
            const int n = is_z(k) ? idx : o;
            const auto* c = constraint(m, n);
            if (!c)
                continue;
            const auto& other = is_z(k) ? a_maps_[static_cast<std::size_t>(o)] : z_maps_[static_cast<std::size_t>(o)];
            for (std::size_t q = 0; q < other.size(); ++q) {
                const bool want = is_z(k) ? c->equal[q][static_cast<std::size_t>(p)] : c->equal[static_cast<std::size_t>(p)][q];
                if ((other[q] == x) != want)
                    return false;
            }
        }
        return true;
    }

    bool fix_cell(std::size_t sym, const Tuple& t, bool value) {
        const auto idx = work_.index(t);
        const auto before = work_.get(sym, idx);
        if (before == PartialStructure::kFree) {
            work_.set_raw(sym, idx, value ? 1 : 0);
            undo_.push_back({sym, idx});
            return true;
        }
        return (before == 1) == value;
    }

    bool fix_part_and_continue(int k) {
        const auto mark = undo_.size();
        bool ok = true;
        const auto& part = is_z(k) ? z_ : a_;
        const auto& map = map_of(k);
        for (std::size_t sym = 0; ok && sym < part.signature().size(); ++sym) {
            const auto& tab = part.table(sym);
            for (std::uint64_t i = 0; ok && i < tab.cells(); ++i) {
                auto t = tab.tuple_at(i);
                for (auto& v : t)
                    v = map[static_cast<std::size_t>(v)];
                ok = fix_cell(sym, t, tab.test(i));
            }
        }
        const int idx = k / 2;
        const int placed_opposite = is_z(k) ? idx + 1 : idx;
        for (int o = 0; ok && o < placed_opposite; ++o) {
            const int m = is_z(k) ? o : idx;
            const int n = is_z(k) ? idx : o;
            const auto* c = constraint(m, n);
            if (!c)
                continue;
            const auto& am = a_maps_[static_cast<std::size_t>(m)];
            const auto& zn = z_maps_[static_cast<std::size_t>(n)];
            for (const auto& cell : c->cells) {
                Tuple t;
                for (auto [z_side, pos] : cell.entries)
                    t.push_back(z_side ? zn[static_cast<std::size_t>(pos)] : am[static_cast<std::size_t>(pos)]);
                if (!(ok = fix_cell(cell.symbol, t, cell.value)))
                    break;
            }
        }
        bool stop = false;
        if (ok)
            stop = place_part(k + 1);
        while (undo_.size() > mark) {
            work_.set_raw(undo_.back().first, undo_.back().second, PartialStructure::kFree);
            undo_.pop_back();
        }
        return stop;
    }

    bool finish() {
        PartialStructure partial(spec_.signature(), host_size_);
        for (std::size_t sym = 0; sym < spec_.signature().size(); ++sym) {
            const int r = spec_.signature()[sym].arity;
            for (std::uint64_t i = 0; i < partial.cells(sym); ++i) {
                const auto t = detail::decode_tuple(i, host_size_, r);
                const auto v = work_.get(sym, work_.index(t));
                if (v != PartialStructure::kFree)
                    partial.set_raw(sym, i, v);
            }
        }
        auto host = first_completion(spec_, std::move(partial), budget_);
        if (!host)
            return false;
        UnstableWitness w;
        w.depth = depth_;
        w.host = std::move(*host);
        for (const auto& m : a_maps_)
            w.a_parts.push_back(Embedding{m});
        for (const auto& m : z_maps_)
            w.z_parts.push_back(Embedding{m});
        w.tau_lt = lt_.code;
        w.tau_gt = gt_.code;
        if (!verify_unstable_witness(spec_, a_, z_, w))
            return false;
        found_ = std::move(w);
        return true;
    }

    const AgeSpec& spec_;
    const Structure& a_;
    const Structure& z_;
    int depth_;
    int max_host_;
    const PatternShape& lt_;
    const PatternShape& gt_;
    Budget* budget_;
    PartialStructure work_;
    std::vector<std::pair<std::size_t, std::uint64_t>> undo_;
    std::vector<VertexMap> a_maps_, z_maps_;
    int host_size_ = 0;
    std::optional<UnstableWitness> found_;
};

} // namespace detail

inline int default_max_host(const Structure& a, const Structure& z, int depth) {
    return std::min(kMaxVertices, depth * (a.size() + z.size()));
}

inline StabilityReport stability_search(const AgeSpec& spec, const Structure& a, const Structure& z, int depth,
                                        int max_host = 0, Budget* budget = nullptr) {
    if (depth < 2)
        throw InputError("stability: depth must be at least 2 (no off-diagonal pair exists below that)");
    if (!member(spec, a) || !member(spec, z))
        throw InputError("stability: A and Z must belong to the age");
    if (max_host <= 0)
        max_host = default_max_host(a, z, depth);
    if (max_host > kMaxVertices)
        throw InputError("stability: max_host exceeds the vertex limit");
    Budget local;
    Budget* b = budget ? budget : &local;
    const auto start = b->used();

    StabilityReport report;
    report.depth = depth;
    report.max_host = max_host;
    const auto patterns = joint_embeddings(spec, a, {z}, b);
    report.patterns = patterns.size();
    std::vector<detail::PatternShape> shapes;
    for (const auto& e : patterns)
        shapes.push_back(detail::shape_of(e));
    for (std::size_t i = 0; i < shapes.size() && !report.witness; ++i)
        for (std::size_t j = 0; j < shapes.size() && !report.witness; ++j) {
            if (i == j)
                continue;
            ++report.pairs_tried;
            detail::UnstableSearch search(spec, a, z, depth, max_host, shapes[i], shapes[j], b);
            report.witness = search.run();
        }
    report.stable = !report.witness;
    report.nodes = b->used() - start;
    return report;
}

inline std::optional<UnstableWitness> unstable_witness(const AgeSpec& spec, const Structure& a, const Structure& z,
                                                       int depth, int max_host = 0, Budget* budget = nullptr) {
    return stability_search(spec, a, z, depth, max_host, budget).witness;
}

inline bool stable_up_to(const AgeSpec& spec, const Structure& a, const Structure& z, int depth, int max_host = 0,
                         Budget* budget = nullptr) {
    return stability_search(spec, a, z, depth, max_host, budget).stable;
}

} // namespace fraisse
