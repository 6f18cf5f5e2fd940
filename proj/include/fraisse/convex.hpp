#pragma once

// Convex arrows: for every coloring chi of Binom(C, A) into [0, 1] there is a convex combination
// sum_i w_i chi(b_i ∘ -) of copies b_i of B in C whose oscillation on Binom(B, A) is below eps.
//
// The value of the instance is  max_chi min_w osc(sum_i w_i chi(b_i ∘ -)).  For a fixed chi the
// inner minimum is a linear program over (w, hi, lo):
//   minimize hi - lo  s.t.  sum_i w_i chi(b_i∘a) <= hi,  sum_i w_i chi(b_i∘a) >= lo,  sum_i w_i = 1.
// The adversary ranges over {0,1}-valued colorings, and complementary colorings are skipped because
// chi and 1 - chi have the same inner value. A copy on which chi is already constant gives inner
// value 0 with a single copy. Every LP optimum is checked against its dual.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fraisse/arrows.hpp"
#include "fraisse/lp.hpp"

namespace fraisse {

struct ConvexCombination {
    std::vector<double> weights;
    std::vector<Embedding> copies;
};

/// Strategy for one adversary coloring, given as a bit mask over embeddings(A, C).
struct ConvexResponse {
    std::uint64_t mask = 0;
    double value = 0.0;
    std::vector<std::pair<std::size_t, double>> weights; // (copy index, weight), weight > 0
};

struct ConvexArrowResult {
    Verdict verdict = Verdict::holds;
    std::string reason;
    double epsilon = 0.0;
    std::optional<double> value;         // game value; absent when short-circuited
    std::vector<Embedding> domain;       // embeddings(A, C)
    std::vector<Embedding> copies;       // embeddings(B, C)
    std::uint64_t colorings = 0;         // adversary colorings examined
    double max_gap = 0.0;                // largest primal-dual gap met
    std::optional<ConvexResponse> worst; // first coloring attaining the value
    std::vector<double> worst_dual;      // dual solution certifying the worst inner value
    std::optional<ConvexCombination> strategy;
    std::vector<ConvexResponse> responses; // one per examined coloring when the verdict holds
};

struct ConvexOptions {
    int max_domain = 24; // at most 2^(max_domain-1) adversary colorings
    bool record_responses = true;
    Budget* budget = nullptr;
};

inline constexpr double kGapTolerance = 1e-6;

namespace detail {

// values[a][i] = chi(b_i ∘ a) for the coloring given by mask.
inline std::vector<std::vector<double>> convex_table(std::uint64_t mask, const std::vector<std::vector<int>>& positions) {
    const auto copies = positions.size();
    const auto inner = copies ? positions[0].size() : 0;
    std::vector<std::vector<double>> t(inner, std::vector<double>(copies, 0.0));
    for (std::size_t i = 0; i < copies; ++i)
        for (std::size_t a = 0; a < inner; ++a)
            t[a][i] = ((mask >> positions[i][a]) & 1U) ? 1.0 : 0.0;
    return t;
}

/// Inner LP for one coloring; variables are w_0..w_{m-1}, hi, lo.
inline lp::Program convex_program(const std::vector<std::vector<double>>& table, std::size_t copies) {
    lp::Program p;
    p.objective.assign(copies + 2, 0.0);
    p.objective[copies] = 1.0;
    p.objective[copies + 1] = -1.0;
    for (const auto& row : table) {
        lp::Row up{row, lp::Sense::le, 0.0};
        up.coeffs.push_back(-1.0);
        up.coeffs.push_back(0.0);
        p.rows.push_back(std::move(up));
        lp::Row down{row, lp::Sense::ge, 0.0};
        down.coeffs.push_back(0.0);
        down.coeffs.push_back(-1.0);
        p.rows.push_back(std::move(down));
    }
    lp::Row sum{std::vector<double>(copies, 1.0), lp::Sense::eq, 1.0};
    sum.coeffs.push_back(0.0);
    sum.coeffs.push_back(0.0);
    p.rows.push_back(std::move(sum));
    return p;
}

struct InnerSolution {
    double value = 0.0;
    double gap = 0.0;
    std::vector<std::pair<std::size_t, double>> weights;
    std::vector<double> dual;
};

inline InnerSolution solve_inner(std::uint64_t mask, const std::vector<std::vector<int>>& positions) {
    InnerSolution s;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        bool constant = true;
        for (int x : positions[i])
            constant = constant && (((mask >> x) & 1U) == ((mask >> positions[i][0]) & 1U));
        if (constant) {
            s.weights = {{i, 1.0}};
            return s;
        }
    }
    const auto program = convex_program(convex_table(mask, positions), positions.size());
    const auto primal = lp::solve(program);
    const auto dual = lp::solve(lp::dual(program));
    if (primal.status != lp::Status::optimal || dual.status != lp::Status::optimal)
        throw std::logic_error("convex-arrow: inner linear program not solved to optimality");
    s.value = std::max(0.0, primal.value);
    s.gap = std::abs(primal.value + dual.value);
    if (s.gap > kGapTolerance)
        throw std::logic_error("convex-arrow: primal-dual gap above tolerance");
    double total = 0.0;
    for (std::size_t i = 0; i < positions.size(); ++i)
        if (primal.x[i] > 1e-12)
            total += primal.x[i];
    for (std::size_t i = 0; i < positions.size(); ++i)
        if (primal.x[i] > 1e-12)
            s.weights.emplace_back(i, primal.x[i] / total);
    s.dual = dual.x;
    return s;
}

// positions[i][a]: domain index of b_i ∘ a.
inline std::vector<std::vector<int>> copy_positions(const std::vector<Embedding>& domain,
                                                    const std::vector<Embedding>& inner,
                                                    const std::vector<Embedding>& copies) {
    const auto index = index_of(domain);
    std::vector<std::vector<int>> out;
    for (const auto& b : copies) {
        std::vector<int> row;
        for (const auto& a : inner)
            row.push_back(index.at(compose(b, a).map));
        out.push_back(std::move(row));
    }
    return out;
}

} // namespace detail

/// Oscillation of sum_i w_i chi(b_i ∘ -) on Binom(B, A) for a {0,1}-coloring given as a mask.
inline double mixed_oscillation(std::uint64_t mask, const std::vector<std::vector<int>>& positions,
                                const std::vector<std::pair<std::size_t, double>>& weights) {
    if (positions.empty())
        return 0.0;
    std::vector<double> v(positions[0].size(), 0.0);
    for (auto [i, w] : weights)
        for (std::size_t a = 0; a < v.size(); ++a)
            v[a] += w * (((mask >> positions[i][a]) & 1U) ? 1.0 : 0.0);
    return oscillation(v);
}

inline ConvexArrowResult convex_arrow(const Structure& c, const Structure& a, const Structure& b, double eps,
                                      ConvexOptions options = {}) {
    if (!(eps > 0))
        throw InputError("convex-arrow: epsilon must be positive");
    ConvexArrowResult r;
    r.epsilon = eps;
    r.domain = embeddings(a, c, options.budget);
    r.copies = embeddings(b, c, options.budget);
    if (r.copies.empty())
        throw InputError("convex-arrow: B does not embed in C");
    const auto inner = embeddings(a, b, options.budget);
    if (inner.empty()) {
        r.verdict = Verdict::degenerate_holds;
        r.reason = "A does not embed in B";
        r.strategy = ConvexCombination{{1.0}, {r.copies.front()}};
        return r;
    }
    if (eps >= 1.0) {
        r.verdict = Verdict::holds;
        r.reason = "epsilon >= 1 exceeds every oscillation of a [0,1]-valued coloring";
        r.strategy = ConvexCombination{{1.0}, {r.copies.front()}};
        return r;
    }
    const auto n = r.domain.size();
    if (static_cast<int>(n) > options.max_domain || n >= 63)
        throw ResourceLimit("convex-arrow: " + std::to_string(n) + " embeddings of A into C exceed the adversary cap of " +
                            std::to_string(options.max_domain));
    const auto positions = detail::copy_positions(r.domain, inner, r.copies);
    // Masks with the top bit clear: one representative per complementary pair.
    const std::uint64_t count = n == 0 ? 1 : (std::uint64_t{1} << (n - 1));
    double best = -1.0;
    std::vector<ConvexResponse> responses;
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        if (options.budget)
            options.budget->tick();
        auto s = detail::solve_inner(mask, positions);
        r.max_gap = std::max(r.max_gap, s.gap);
        if (s.value > best + kTolerance) {
            best = s.value;
            r.worst = ConvexResponse{mask, s.value, s.weights};
            r.worst_dual = s.dual;
        }
        if (options.record_responses)
            responses.push_back({mask, s.value, std::move(s.weights)});
    }
    r.colorings = count;
    r.value = std::max(0.0, best);
    ConvexCombination combo;
    for (auto [i, w] : r.worst->weights) {
        combo.weights.push_back(w);
        combo.copies.push_back(r.copies[i]);
    }
    r.strategy = std::move(combo);
    if (strictly_below(*r.value, eps)) {
        r.verdict = Verdict::holds;
        r.reason = "every {0,1}-coloring admits a convex combination of copies with oscillation below epsilon";
        r.responses = std::move(responses);
    } else {
        r.verdict = Verdict::fails;
        r.reason = "some coloring keeps every convex combination of copies at oscillation >= epsilon";
    }
    return r;
}

} // namespace fraisse
