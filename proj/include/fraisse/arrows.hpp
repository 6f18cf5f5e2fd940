#pragma once

// Classical partition arrows C -> (B)^A_k, the smallest-C scan over an age, and
// up-to-epsilon witnesses for real-valued colorings.
//
// The counterexample search colors Binom(C, A) in lexicographic order of embeddings.
// Colorings are kept in first-occurrence normal form (a new color is always the least unused
// one), a partial coloring is cut as soon as a copy of B is monochromatic, and a copy with one
// position left forbids the color it would complete. A partial coloring is also cut when some
// automorphism of C followed by renaming colors yields a lexicographically smaller prefix.
// None of the cuts removes the lexicographically least bad coloring in normal form, so the
// first one found is that coloring for every thread count.

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "fraisse/age.hpp"
#include "fraisse/budget.hpp"
#include "fraisse/coloring.hpp"
#include "fraisse/embedding.hpp"
#include "fraisse/enumerate.hpp"
#include "fraisse/groups.hpp"

namespace fraisse {

enum class Verdict { holds, fails, degenerate_holds, precondition_failed };

inline std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::degenerate_holds: return "degenerate-holds";
    case Verdict::precondition_failed: return "precondition-failed";
    }
    return "?";
}

inline bool positive(Verdict v) { return v == Verdict::holds || v == Verdict::degenerate_holds; }

struct ClassicalArrowResult {
    Verdict verdict = Verdict::holds;
    std::string reason;
    int colors = 0;
    std::vector<Embedding> domain;      // embeddings(A, C)
    std::size_t copies = 0;             // |embeddings(B, C)|
    std::size_t automorphisms = 0;      // |Aut(C)| used for symmetry breaking
    std::optional<Coloring<int>> counterexample;
};

struct ArrowOptions {
    int threads = 1;
    Budget* budget = nullptr;
};

namespace detail {

// Copies of B as sorted sets of domain indices, deduplicated.
inline std::vector<std::vector<int>> copy_index_sets(const std::vector<Embedding>& domain,
                                                     const std::vector<Embedding>& inner,
                                                     const std::vector<Embedding>& copies) {
    std::map<VertexMap, int> index;
    for (std::size_t i = 0; i < domain.size(); ++i)
        index.emplace(domain[i].map, static_cast<int>(i));
    std::vector<std::vector<int>> sets;
    for (const auto& b : copies) {
        std::vector<int> s;
        for (const auto& a : inner)
            s.push_back(index.at(compose(b, a).map));
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        sets.push_back(std::move(s));
    }
    std::sort(sets.begin(), sets.end());
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
    return sets;
}

class BadColoringSearch {
public:
    BadColoringSearch(int n, int k, const std::vector<std::vector<int>>& sets,
                      const std::vector<std::vector<int>>& symmetries, Budget* budget)
        : n_(n), k_(k), sets_(sets), symmetries_(symmetries), budget_(budget),
          color_(static_cast<std::size_t>(n), -1),
          forbidden_(static_cast<std::size_t>(n) * static_cast<std::size_t>(k), 0),
          containing_(static_cast<std::size_t>(n)) {
        for (std::size_t s = 0; s < sets_.size(); ++s)
            for (int i : sets_[s])
                containing_[static_cast<std::size_t>(i)].push_back(static_cast<int>(s));
    }

    // Colors a fixed prefix first; false when the prefix itself is cut.
    bool replay(const std::vector<int>& prefix) {
        for (int c : prefix) {
            if (!admissible(depth_, c) || !assign(depth_, c))
                return false;
            ++depth_;
        }
        return true;
    }

    // Lexicographically first bad coloring below the current prefix.
    std::optional<std::vector<int>> run(const std::atomic<bool>* stop = nullptr) {
        stop_ = stop;
        if (descend(depth_))
            return color_;
        return std::nullopt;
    }

    // Every admissible prefix of the given length, in search order.
    std::vector<std::vector<int>> prefixes(int length) {
        std::vector<std::vector<int>> out;
        collect(0, length, out);
        return out;
    }

    [[nodiscard]] bool cancelled() const { return cancelled_; }

private:
    [[nodiscard]] int max_color(int upto) const {
        int m = -1;
        for (int i = 0; i < upto; ++i)
            m = std::max(m, color_[static_cast<std::size_t>(i)]);
        return m;
    }

    [[nodiscard]] bool admissible(int i, int c) const {
        if (c < 0 || c >= k_ || c > max_color(i) + 1)
            return false;
        return forbidden_[static_cast<std::size_t>(i * k_ + c)] == 0;
    }

    // Sets color c at index i and applies all cuts; undoes itself on failure.
    bool assign(int i, int c) {
        color_[static_cast<std::size_t>(i)] = c;
        const auto mark = trail_.size();
        bool ok = true;
        for (int s : containing_[static_cast<std::size_t>(i)]) {
            int unassigned = -1, missing = 0;
            bool mono = true;
            for (int x : sets_[static_cast<std::size_t>(s)]) {
                const int cx = color_[static_cast<std::size_t>(x)];
                if (cx < 0) {
                    ++missing;
                    unassigned = x;
                } else if (cx != c) {
                    mono = false;
                }
            }
            if (!mono)
                continue;
            if (missing == 0) {
                ok = false;
                break;
            }
            if (missing == 1) {
                const auto slot = static_cast<std::size_t>(unassigned * k_ + c);
                ++forbidden_[slot];
                trail_.push_back(slot);
                if (all_forbidden(unassigned)) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok)
            ok = lex_leader(i);
        if (!ok)
            undo(i, mark);
        else
            marks_.push_back(mark);
        return ok;
    }

    void unassign(int i) {
        const auto mark = marks_.back();
        marks_.pop_back();
        undo(i, mark);
    }

    void undo(int i, std::size_t mark) {
        while (trail_.size() > mark) {
            --forbidden_[trail_.back()];
            trail_.pop_back();
        }
        color_[static_cast<std::size_t>(i)] = -1;
    }

    [[nodiscard]] bool all_forbidden(int x) const {
        for (int c = 0; c < k_; ++c)
            if (forbidden_[static_cast<std::size_t>(x * k_ + c)] == 0)
                return false;
        return true;
    }

    // False when some symmetry maps the colored prefix 0..i to a smaller normal form.
    bool lex_leader(int i) {
        std::vector<int> rename(static_cast<std::size_t>(k_));
        for (const auto& perm : symmetries_) {
            std::fill(rename.begin(), rename.end(), -1);
            int next = 0;
            for (int x = 0; x <= i; ++x) {
                const int src = perm[static_cast<std::size_t>(x)];
                if (src > i)
                    break;
                int& r = rename[static_cast<std::size_t>(color_[static_cast<std::size_t>(src)])];
                if (r < 0)
                    r = next++;
                const int mine = color_[static_cast<std::size_t>(x)];
                if (r < mine)
                    return false;
                if (r > mine)
                    break;
            }
        }
        return true;
    }

    bool descend(int i) {
        if (stop_ && stop_->load(std::memory_order_relaxed)) {
            cancelled_ = true;
            return false;
        }
        if (i == n_)
            return true;
        if (budget_)
            budget_->tick();
        const int top = std::min(k_ - 1, max_color(i) + 1);
        for (int c = 0; c <= top; ++c) {
            if (forbidden_[static_cast<std::size_t>(i * k_ + c)] != 0)
                continue;
            if (!assign(i, c))
                continue;
            if (descend(i + 1))
                return true;
            unassign(i);
        }
        return false;
    }

    void collect(int i, int length, std::vector<std::vector<int>>& out) {
        if (i == length) {
            out.emplace_back(color_.begin(), color_.begin() + length);
            return;
        }
        const int top = std::min(k_ - 1, max_color(i) + 1);
        for (int c = 0; c <= top; ++c) {
            if (forbidden_[static_cast<std::size_t>(i * k_ + c)] != 0 || !assign(i, c))
                continue;
            collect(i + 1, length, out);
            unassign(i);
        }
    }

    int n_, k_;
    const std::vector<std::vector<int>>& sets_;
    const std::vector<std::vector<int>>& symmetries_;
    Budget* budget_;
    std::vector<int> color_;
    std::vector<int> forbidden_;
    std::vector<std::vector<int>> containing_;
    std::vector<std::size_t> trail_;
    std::vector<std::size_t> marks_;
    int depth_ = 0;
    const std::atomic<bool>* stop_ = nullptr;
    bool cancelled_ = false;
};

// Parallel search over prefixes; the earliest prefix (in search order) with a bad coloring wins.
inline std::optional<std::vector<int>> parallel_bad_coloring(int n, int k, const std::vector<std::vector<int>>& sets,
                                                             const std::vector<std::vector<int>>& symmetries,
                                                             int threads, Budget* budget) {
    if (threads <= 1 || n < 4) {
        BadColoringSearch s(n, k, sets, symmetries, budget);
        return s.run();
    }
    int length = 1;
    std::vector<std::vector<int>> prefixes;
    for (; length < n; ++length) {
        BadColoringSearch probe(n, k, sets, symmetries, nullptr);
        prefixes = probe.prefixes(length);
        if (static_cast<int>(prefixes.size()) >= 4 * threads || length >= n / 2)
            break;
    }
    const std::size_t count = prefixes.size();
    std::vector<std::optional<std::vector<int>>> results(count);
    std::vector<std::atomic<bool>> stop(count);
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> best{count};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        // Each worker counts against its own copy of the budget.
        Budget local = budget ? *budget : Budget();
        for (;;) {
            const auto t = next.fetch_add(1);
            if (t >= count || t > best.load())
                return;
            try {
                BadColoringSearch s(n, k, sets, symmetries, &local);
                if (!s.replay(prefixes[t]))
                    continue;
                auto r = s.run(&stop[t]);
                if (r) {
                    results[t] = std::move(r);
                    auto b = best.load();
                    while (t < b && !best.compare_exchange_weak(b, t)) {}
                    for (std::size_t later = t + 1; later < count; ++later)
                        stop[later].store(true);
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                for (auto& s : stop)
                    s.store(true);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back(worker);
    for (auto& th : pool)
        th.join();
    if (failure)
        std::rethrow_exception(failure);
    for (auto& r : results)
        if (r)
            return r;
    return std::nullopt;
}

} // namespace detail

inline ClassicalArrowResult classical_arrow(const Structure& c, const Structure& a, const Structure& b, int k,
                                            ArrowOptions options = {}) {
    if (k < 1)
        throw InputError("arrow: the number of colors must be at least 1");
    ClassicalArrowResult r;
    r.colors = k;
    r.domain = embeddings(a, c, options.budget);
    const auto copies = embeddings(b, c, options.budget);
    const auto inner = embeddings(a, b, options.budget);
    r.copies = copies.size();
    if (copies.empty()) {
        r.verdict = Verdict::fails;
        r.reason = "no copy of B";
        return r;
    }
    if (inner.empty()) {
        r.verdict = Verdict::degenerate_holds;
        r.reason = "A does not embed in B";
        return r;
    }
    const auto sets = detail::copy_index_sets(r.domain, inner, copies);
    const auto group = automorphisms(c, 1'000'000, options.budget);
    r.automorphisms = group.elements.size();
    std::vector<std::vector<int>> symmetries;
    const auto index = detail::index_of(r.domain);
    for (std::size_t g = 1; g < group.elements.size(); ++g)
        symmetries.push_back(act_on_embeddings(group.elements[g], r.domain, index));
    auto bad = detail::parallel_bad_coloring(static_cast<int>(r.domain.size()), k, sets, symmetries, options.threads,
                                             options.budget);
    if (bad) {
        r.verdict = Verdict::fails;
        r.reason = "coloring with no monochromatic copy of B";
        r.counterexample = Coloring<int>(r.domain, std::move(*bad));
    } else {
        r.verdict = Verdict::holds;
        r.reason = "every coloring has a monochromatic copy of B (exhaustive)";
    }
    return r;
}

struct ArrowSearchResult {
    std::optional<Structure> found;
    std::optional<ClassicalArrowResult> certificate;
    int max_n = 0;
    std::vector<std::pair<int, std::size_t>> scanned; // (size, candidates tested)
};

/// First structure of the age (by size, then canonical code) for which the arrow holds.
inline ArrowSearchResult arrow_search(const AgeSpec& spec, const Structure& a, const Structure& b, int k, int max_n,
                                      ArrowOptions options = {}) {
    if (max_n < b.size())
        throw InputError("arrow-search: max_n must be at least |B|");
    if (!member(spec, a) || !member(spec, b))
        throw InputError("arrow-search: A and B must belong to the age");
    ArrowSearchResult out;
    out.max_n = max_n;
    for (int n = b.size(); n <= max_n; ++n) {
        std::size_t tested = 0;
        for (auto& c : enumerate_structures(spec, n, {}, options.budget)) {
            ++tested;
            if (!embeds(b, c, options.budget))
                continue;
            auto r = classical_arrow(c, a, b, k, options);
            if (positive(r.verdict)) {
                out.scanned.emplace_back(n, tested);
                out.found = std::move(c);
                out.certificate = std::move(r);
                return out;
            }
        }
        out.scanned.emplace_back(n, tested);
    }
    return out;
}

/// First b in embeddings(B, U) on whose copy chi oscillates strictly less than eps.
inline std::optional<Embedding> epsilon_constant_witness(const Structure& u, const Structure& a,
                                                         const Coloring<double>& chi, const Structure& b, double eps) {
    if (!(eps > 0))
        throw InputError("epsilon_constant_witness: epsilon must be positive");
    if (chi.size() != embeddings(a, u).size())
        throw InputError("epsilon_constant_witness: coloring is not total on embeddings(A, U)");
    const auto inner = embeddings(a, b);
    for (const auto& e : embeddings(b, u))
        if (strictly_below(oscillation(restrict_along(chi, e, inner)), eps))
            return e;
    return std::nullopt;
}

} // namespace fraisse
