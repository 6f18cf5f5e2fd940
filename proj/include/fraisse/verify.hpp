#pragma once

// Independent checkers for the results of the deciders. They re-derive everything from
// embeddings() and pattern codes and share no search code with the deciders, except where a
// negative claim can only be confirmed by repeating an exhaustive enumeration.

#include <optional>
#include <set>
#include <vector>

#include "fraisse/amalgamation.hpp"
#include "fraisse/arrows.hpp"
#include "fraisse/convex.hpp"
#include "fraisse/definable.hpp"
#include "fraisse/proximal.hpp"
#include "fraisse/stability.hpp"

namespace fraisse::check {

/// A coloring of embeddings(A, C) into k colors with no monochromatic copy of B.
inline bool classical_counterexample(const Structure& c, const Structure& a, const Structure& b, int k,
                                     const Coloring<int>& chi) {
    const auto domain = embeddings(a, c);
    if (domain.size() != chi.size())
        return false;
    for (const auto& e : domain)
        if (!chi.contains(e.map))
            return false;
    for (int v : chi.values())
        if (v < 0 || v >= k)
            return false;
    const auto inner = embeddings(a, b);
    if (inner.empty())
        return false;
    for (const auto& copy : embeddings(b, c))
        if (is_constant(restrict_along(chi, copy, inner)))
            return false;
    return true;
}

/// First bad k-coloring in plain lexicographic order, by backtracking without symmetry breaking.
inline std::optional<std::vector<int>> first_bad_coloring(const Structure& c, const Structure& a, const Structure& b,
                                                          int k, Budget* budget = nullptr) {
    const auto domain = embeddings(a, c);
    const auto inner = embeddings(a, b);
    std::map<VertexMap, std::size_t> index;
    for (std::size_t i = 0; i < domain.size(); ++i)
        index.emplace(domain[i].map, i);
    // For every domain index, the copies whose largest index it is.
    std::vector<std::vector<std::vector<std::size_t>>> closing(domain.size());
    for (const auto& copy : embeddings(b, c)) {
        std::vector<std::size_t> s;
        for (const auto& e : inner)
            s.push_back(index.at(compose(copy, e).map));
        if (s.empty())
            continue;
        const auto top = *std::max_element(s.begin(), s.end());
        closing[top].push_back(std::move(s));
    }
    std::vector<int> color(domain.size(), -1);
    auto rec = [&](auto&& self, std::size_t i) -> bool {
        if (budget)
            budget->tick();
        if (i == domain.size())
            return true;
        for (int v = 0; v < k; ++v) {
            color[i] = v;
            bool ok = true;
            for (const auto& s : closing[i]) {
                bool mono = true;
                for (auto x : s)
                    mono = mono && color[x] == v;
                if (mono) {
                    ok = false;
                    break;
                }
            }
            if (ok && self(self, i + 1))
                return true;
        }
        color[i] = -1;
        return false;
    };
    if (embeddings(b, c).empty() || inner.empty())
        return std::nullopt;
    if (rec(rec, 0))
        return color;
    return std::nullopt;
}

inline bool union_supported(const JointEmbedding& j) {
    std::vector<bool> covered(static_cast<std::size_t>(j.host.size()), false);
    for (const auto& p : j.parts)
        for (Vertex v : p.map) {
            if (v < 0 || v >= j.host.size())
                return false;
            covered[static_cast<std::size_t>(v)] = true;
        }
    return std::all_of(covered.begin(), covered.end(), [](bool x) { return x; });
}

/// Host in the age, parts are embeddings of the given structures, union support.
inline bool joint_embedding(const AgeSpec& spec, const JointEmbedding& j, const std::vector<const Structure*>& parts) {
    if (j.parts.size() != parts.size() || !(j.host.signature() == spec.signature()) || !member(spec, j.host))
        return false;
    for (std::size_t i = 0; i < parts.size(); ++i)
        if (!is_embedding(j.parts[i], *parts[i], j.host))
            return false;
    return union_supported(j);
}

namespace detail {

inline bool constant_patterns(const JointEmbedding& j, const Embedding& b, const std::vector<Embedding>& inner) {
    for (std::size_t i = 1; i < j.parts.size(); ++i) {
        std::set<PatternCode> seen;
        for (const auto& a : inner)
            seen.insert(pattern_in(j.host, compose(compose(j.parts[0], b), a), j.parts[i]));
        if (seen.size() > 1)
            return false;
    }
    return true;
}

} // namespace detail

/// Re-checks a definable or stable arrow result case by case.
inline bool definable(const AgeSpec& spec, const Structure& c, const Structure& a, const Structure& b,
                      const std::vector<Structure>& zs, const DefinableArrowResult& r) {
    if (r.verdict == Verdict::precondition_failed) {
        if (r.instability.empty())
            return false;
        for (const auto& w : r.instability) {
            bool some = false;
            for (const auto& z : zs)
                some = some || verify_unstable_witness(spec, a, z, w);
            if (!some)
                return false;
        }
        return true;
    }
    const auto copies = embeddings(b, c);
    const auto inner = embeddings(a, b);
    if (copies.empty())
        return r.verdict == Verdict::fails;
    if (inner.empty())
        return r.verdict == Verdict::degenerate_holds;
    std::vector<const Structure*> parts{&c};
    for (const auto& z : zs)
        parts.push_back(&z);
    std::set<PatternCode> covered;
    for (std::size_t i = 0; i < r.cases.size(); ++i) {
        const auto& dc = r.cases[i];
        if (!joint_embedding(spec, dc.joint, parts))
            return false;
        covered.insert(pattern_of(dc.joint));
        const bool last_failing = r.verdict == Verdict::fails && i + 1 == r.cases.size();
        if (last_failing) {
            if (dc.copy)
                return false;
            for (const auto& e : copies)
                if (detail::constant_patterns(dc.joint, e, inner))
                    return false;
        } else {
            if (!dc.copy || !is_embedding(*dc.copy, b, c) || !detail::constant_patterns(dc.joint, *dc.copy, inner))
                return false;
        }
    }
    if (r.verdict == Verdict::holds) {
        std::set<PatternCode> expected;
        for (const auto& e : joint_embeddings(spec, c, zs))
            expected.insert(e.code);
        return expected == covered;
    }
    return r.verdict == Verdict::fails && !r.cases.empty();
}

inline bool roelcke(const AgeSpec& spec, const Structure& a, const Structure& b, const Structure& z,
                    const JointEmbedding& j) {
    return joint_embedding(spec, j, {&b, &z}) && is_roelcke_witness(j, a, b);
}

inline bool proximal_pass(const Structure& u, const Structure& a, const Coloring<double>& chi, const Structure& d,
                          const std::vector<Vertex>& e_vertices) {
    if (e_vertices.empty())
        return false;
    const auto e = induced_substructure(u, e_vertices);
    const auto e_in_u = embeddings(e, u);
    const auto d_in_e = embeddings(d, e);
    const auto a_in_d = embeddings(a, d);
    if (d_in_e.empty())
        return false;
    for (const auto& e1 : e_in_u)
        for (const auto& e2 : e_in_u) {
            bool some = false;
            for (const auto& dd : d_in_e) {
                bool agree = true;
                for (const auto& aa : a_in_d) {
                    const auto m = compose(dd, aa);
                    agree = agree && std::abs(chi(compose(e1, m)) - chi(compose(e2, m))) <= kTolerance;
                }
                some = some || agree;
            }
            if (!some)
                return false;
        }
    return true;
}

/// A proximal report entry; failures are confirmed by trying every vertex subset as E.
inline bool proximal(const Structure& u, const Structure& a, const Coloring<double>& chi, const ProximalEntry& entry) {
    switch (entry.status) {
    case ProximalStatus::universe_too_small: return !embeds(entry.d, u);
    case ProximalStatus::pass: return proximal_pass(u, a, chi, entry.d, entry.e_vertices);
    case ProximalStatus::fail:
        if (!embeds(entry.d, u))
            return false;
        for (std::uint64_t subset = 1; subset < (std::uint64_t{1} << u.size()); ++subset) {
            std::vector<Vertex> vs;
            for (int v = 0; v < u.size(); ++v)
                if ((subset >> v) & 1U)
                    vs.push_back(v);
            if (static_cast<int>(vs.size()) >= entry.d.size() && proximal_pass(u, a, chi, entry.d, vs))
                return false;
        }
        return true;
    }
    return false;
}

/// Convex arrow: a holds result must answer every coloring with oscillation below epsilon; a
/// fails result must carry a feasible dual solution bounding the worst inner value from below.
inline bool convex(const Structure& c, const Structure& a, const Structure& b, const ConvexArrowResult& r) {
    const auto domain = embeddings(a, c);
    const auto copies = embeddings(b, c);
    const auto inner = embeddings(a, b);
    if (copies.empty() || domain != r.domain || copies != r.copies)
        return false;
    if (inner.empty())
        return r.verdict == Verdict::degenerate_holds;
    if (r.verdict == Verdict::holds && !r.value)
        return r.epsilon >= 1.0;
    const auto positions = fraisse::detail::copy_positions(domain, inner, copies);
    auto valid_weights = [&](const std::vector<std::pair<std::size_t, double>>& w) {
        double total = 0.0;
        for (auto [i, x] : w) {
            if (i >= copies.size() || x < -kTolerance)
                return false;
            total += x;
        }
        return std::abs(total - 1.0) <= 1e-9 * static_cast<double>(std::max<std::size_t>(1, w.size()));
    };
    const auto n = domain.size();
    const std::uint64_t count = std::uint64_t{1} << (n - 1);
    if (r.verdict == Verdict::holds) {
        if (r.responses.size() != count)
            return false;
        for (std::uint64_t mask = 0; mask < count; ++mask) {
            const auto& resp = r.responses[mask];
            if (resp.mask != mask || !valid_weights(resp.weights))
                return false;
            // chi and its complement have the same oscillation for every combination.
            if (!strictly_below(mixed_oscillation(mask, positions, resp.weights), r.epsilon))
                return false;
        }
        return true;
    }
    if (r.verdict != Verdict::fails || !r.worst || r.worst->mask >= count)
        return false;
    const auto program = fraisse::detail::convex_program(fraisse::detail::convex_table(r.worst->mask, positions),
                                                          copies.size());
    const auto d = lp::dual(program);
    if (r.worst_dual.size() != d.variables())
        return false;
    for (double y : r.worst_dual)
        if (y < -1e-9)
            return false;
    for (const auto& row : d.rows) {
        double lhs = 0.0;
        for (std::size_t j = 0; j < row.coeffs.size(); ++j)
            lhs += row.coeffs[j] * r.worst_dual[j];
        if (lhs > row.rhs + 1e-7)
            return false;
    }
    double bound = 0.0;
    for (std::size_t j = 0; j < d.variables(); ++j)
        bound -= d.objective[j] * r.worst_dual[j];
    return !strictly_below(bound + kGapTolerance, r.epsilon);
}

/// An amalgamation counterexample: valid embeddings and no amalgam in the searched range.
inline bool amalgamation_counterexample(const AgeSpec& spec, AmalgamationProperty property,
                                        const AmalgamationInstance& inst) {
    if (!member(spec, inst.b) || !member(spec, inst.c))
        return false;
    if (inst.a) {
        if (!member(spec, *inst.a) || !is_embedding(inst.f, *inst.a, inst.b) || !is_embedding(inst.g, *inst.a, inst.c))
            return false;
    }
    return !find_amalgam(spec, property, inst).has_value();
}

} // namespace fraisse::check
