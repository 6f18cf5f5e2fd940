#pragma once

// Proximality of a finite coloring chi of Binom(U, A), relativized to the finite universe U:
// for each D of the age up to a size bound, look for a substructure E of U such that any two
// copies e1, e2 of E in U admit a copy d of D in E on which a -> chi(e1∘d∘a) and
// a -> chi(e2∘d∘a) agree. The proximal arrow then asks for a copy of B on which chi is constant.

#include <optional>
#include <set>
#include <vector>

#include "fraisse/canon.hpp"
#include "fraisse/coloring.hpp"
#include "fraisse/enumerate.hpp"

namespace fraisse {

enum class ProximalStatus { pass, fail, universe_too_small };

inline std::string to_string(ProximalStatus s) {
    switch (s) {
    case ProximalStatus::pass: return "pass";
    case ProximalStatus::fail: return "fail";
    case ProximalStatus::universe_too_small: return "universe-too-small";
    }
    return "?";
}

struct ProximalEntry {
    Structure d;
    ProximalStatus status = ProximalStatus::fail;
    std::vector<Vertex> e_vertices; // vertex set of E in U when the status is pass
};

struct ProximalReport {
    int d_max = 0;
    int universe_size = 0;
    std::vector<ProximalEntry> entries;

    [[nodiscard]] bool all_pass() const {
        for (const auto& e : entries)
            if (e.status != ProximalStatus::pass)
                return false;
        return true;
    }
};

/// Refusal of the proximal arrow when the coloring is not known to be proximal.
class PreconditionError : public InputError {
public:
    using InputError::InputError;
};

namespace detail {

inline bool values_agree(double x, double y) { return std::abs(x - y) <= kTolerance; }

// Whether E (given by its embedding set into U) works for D.
inline bool proximal_for(const Coloring<double>& chi, const Structure& a, const Structure& d, const Structure& e,
                         const std::vector<Embedding>& e_in_u) {
    const auto d_in_e = embeddings(d, e);
    if (d_in_e.empty())
        return false;
    const auto a_in_d = embeddings(a, d);
    for (std::size_t i = 0; i < e_in_u.size(); ++i)
        for (std::size_t j = i + 1; j < e_in_u.size(); ++j) {
            bool some = false;
            for (const auto& dd : d_in_e) {
                bool agree = true;
                for (const auto& aa : a_in_d) {
                    const auto inner = compose(dd, aa);
                    if (!values_agree(chi(compose(e_in_u[i], inner)), chi(compose(e_in_u[j], inner)))) {
                        agree = false;
                        break;
                    }
                }
                if (agree) {
                    some = true;
                    break;
                }
            }
            if (!some)
                return false;
        }
    return true;
}

} // namespace detail

inline ProximalEntry proximal_entry(const Structure& u, const Structure& a, const Coloring<double>& chi,
                                    const Structure& d, Budget* budget = nullptr) {
    ProximalEntry entry{d, ProximalStatus::fail, {}};
    if (d.size() > u.size() || !embeds(d, u, budget)) {
        entry.status = ProximalStatus::universe_too_small;
        return entry;
    }
    std::set<CanonicalCode> tried;
    const int n = u.size();
    for (int size = d.size(); size <= n; ++size) {
        // Vertex subsets of this size in lexicographic order.
        std::vector<Vertex> pick(static_cast<std::size_t>(size));
        std::iota(pick.begin(), pick.end(), 0);
        for (;;) {
            if (budget)
                budget->tick();
            const auto e = induced_substructure(u, pick);
            if (tried.insert(canonical_form(e)).second &&
                detail::proximal_for(chi, a, d, e, embeddings(e, u, budget))) {
                entry.status = ProximalStatus::pass;
                entry.e_vertices = pick;
                return entry;
            }
            int k = size - 1;
            while (k >= 0 && pick[static_cast<std::size_t>(k)] == n - size + k)
                --k;
            if (k < 0)
                break;
            ++pick[static_cast<std::size_t>(k)];
            for (int m = k + 1; m < size; ++m)
                pick[static_cast<std::size_t>(m)] = pick[static_cast<std::size_t>(m - 1)] + 1;
        }
    }
    return entry;
}

inline ProximalReport proximal_check(const AgeSpec& spec, const Structure& u, const Structure& a,
                                     const Coloring<double>& chi, int d_max, Budget* budget = nullptr) {
    if (!member(spec, u))
        throw InputError("proximal-check: U must belong to the age");
    if (chi.size() != embeddings(a, u).size())
        throw InputError("proximal-check: coloring is not total on embeddings(A, U)");
    ProximalReport report;
    report.d_max = d_max;
    report.universe_size = u.size();
    for (int n = 1; n <= d_max; ++n)
        for (auto& d : enumerate_structures(spec, n, {}, budget))
            report.entries.push_back(proximal_entry(u, a, chi, d, budget));
    return report;
}

struct ProximalArrowResult {
    ProximalReport precondition;
    std::optional<Embedding> copy;
};

/// First b in embeddings(B, U) with chi constant on its copy; refuses unless every D passed.
inline ProximalArrowResult proximal_arrow(const AgeSpec& spec, const Structure& u, const Structure& a,
                                          const Coloring<double>& chi, const Structure& b, int d_max,
                                          Budget* budget = nullptr) {
    ProximalArrowResult r;
    r.precondition = proximal_check(spec, u, a, chi, d_max, budget);
    if (r.precondition.entries.empty() || !r.precondition.all_pass())
        throw PreconditionError("proximal-arrow: the coloring is not established as proximal up to size " +
                                std::to_string(d_max));
    const auto inner = embeddings(a, b, budget);
    for (const auto& e : embeddings(b, u, budget))
        if (is_constant(restrict_along(chi, e, inner))) {
            r.copy = e;
            break;
        }
    return r;
}

} // namespace fraisse
