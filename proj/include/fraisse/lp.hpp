#pragma once

// Dense two-phase simplex for small linear programs
//   minimize c·x  subject to  row_i·x (<=|>=|=) rhs_i,  x >= 0
// with Bland's rule, plus construction of the dual program so callers can bound the
// primal-dual gap of a reported optimum.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace fraisse::lp {

enum class Sense { le, ge, eq };

struct Row {
    std::vector<double> coeffs;
    Sense sense = Sense::le;
    double rhs = 0.0;
};

struct Program {
    std::vector<double> objective; // minimized
    std::vector<Row> rows;

    [[nodiscard]] std::size_t variables() const { return objective.size(); }
};

enum class Status { optimal, infeasible, unbounded };

struct Solution {
    Status status = Status::infeasible;
    double value = 0.0;
    std::vector<double> x;
};

inline constexpr double kPivotTolerance = 1e-11;

namespace detail {

class Tableau {
public:
    // Columns: structural, then one slack/surplus per inequality row, then one artificial per row.
    explicit Tableau(const Program& p) : m_(p.rows.size()), n_(p.variables()) {
        std::size_t slacks = 0;
        for (const auto& r : p.rows)
            if (r.sense != Sense::eq)
                ++slacks;
        slack0_ = n_;
        art0_ = n_ + slacks;
        cols_ = art0_ + m_;
        a_.assign(m_, std::vector<double>(cols_ + 1, 0.0));
        basis_.assign(m_, 0);
        std::size_t s = slack0_;
        for (std::size_t i = 0; i < m_; ++i) {
            const auto& r = p.rows[i];
            if (r.coeffs.size() != n_)
                throw std::invalid_argument("lp: row width differs from the objective");
            const double sign = r.rhs < 0 ? -1.0 : 1.0;
            for (std::size_t j = 0; j < n_; ++j)
                a_[i][j] = sign * r.coeffs[j];
            if (r.sense != Sense::eq) {
                a_[i][s] = sign * (r.sense == Sense::le ? 1.0 : -1.0);
                ++s;
            }
            a_[i][art0_ + i] = 1.0;
            a_[i][cols_] = sign * r.rhs;
            basis_[i] = art0_ + i;
        }
    }

    Solution solve(const std::vector<double>& objective) {
        // Phase one: minimize the sum of artificials.
        std::vector<double> phase1(cols_, 0.0);
        for (std::size_t i = 0; i < m_; ++i)
            phase1[art0_ + i] = 1.0;
        run(phase1, cols_);
        if (value(phase1) > 1e-9)
            return {Status::infeasible, 0.0, {}};
        drive_out_artificials();

        std::vector<double> cost(cols_, 0.0);
        for (std::size_t j = 0; j < n_; ++j)
            cost[j] = objective[j];
        if (!run(cost, art0_))
            return {Status::unbounded, 0.0, {}};
        Solution sol;
        sol.status = Status::optimal;
        sol.x.assign(n_, 0.0);
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < n_)
                sol.x[basis_[i]] = a_[i][cols_];
        sol.value = 0.0;
        for (std::size_t j = 0; j < n_; ++j)
            sol.value += objective[j] * sol.x[j];
        return sol;
    }

private:
    [[nodiscard]] double value(const std::vector<double>& cost) const {
        double v = 0.0;
        for (std::size_t i = 0; i < m_; ++i)
            v += cost[basis_[i]] * a_[i][cols_];
        return v;
    }

    // Simplex over columns [0, limit); false when unbounded.
    bool run(const std::vector<double>& cost, std::size_t limit) {
        for (;;) {
            std::size_t enter = limit;
            for (std::size_t j = 0; j < limit && enter == limit; ++j) {
                if (is_basic(j))
                    continue;
                double reduced = cost[j];
                for (std::size_t i = 0; i < m_; ++i)
                    reduced -= cost[basis_[i]] * a_[i][j];
                if (reduced < -1e-10)
                    enter = j;
            }
            if (enter == limit)
                return true;
            std::size_t leave = m_;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_; ++i) {
                if (a_[i][enter] <= kPivotTolerance)
                    continue;
                const double ratio = a_[i][cols_] / a_[i][enter];
                if (leave == m_ || ratio < best - 1e-12 || (std::abs(ratio - best) <= 1e-12 && basis_[i] < basis_[leave])) {
                    best = ratio;
                    leave = i;
                }
            }
            if (leave == m_)
                return false;
            pivot(leave, enter);
        }
    }

    void drive_out_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < art0_)
                continue;
            for (std::size_t j = 0; j < art0_; ++j)
                if (std::abs(a_[i][j]) > 1e-9) {
                    pivot(i, j);
                    break;
                }
        }
    }

    [[nodiscard]] bool is_basic(std::size_t j) const {
        for (auto b : basis_)
            if (b == j)
                return true;
        return false;
    }

    void pivot(std::size_t r, std::size_t c) {
        const double p = a_[r][c];
        for (auto& v : a_[r])
            v /= p;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r)
                continue;
            const double f = a_[i][c];
            if (f == 0.0)
                continue;
            for (std::size_t j = 0; j <= cols_; ++j)
                a_[i][j] -= f * a_[r][j];
        }
        basis_[r] = c;
    }

    std::size_t m_, n_, slack0_ = 0, art0_ = 0, cols_ = 0;
    std::vector<std::vector<double>> a_;
    std::vector<std::size_t> basis_;
};

} // namespace detail

inline Solution solve(const Program& p) {
    if (p.rows.empty()) {
        for (double c : p.objective)
            if (c < 0)
                return {Status::unbounded, 0.0, {}};
        return {Status::optimal, 0.0, std::vector<double>(p.variables(), 0.0)};
    }
    detail::Tableau t(p);
    return t.solve(p.objective);
}

/// Dual program written again as a minimization; its optimum is the negated primal optimum.
/// Dual variable y_i is split by sense: >= rows keep y_i >= 0, <= rows use y_i = -w_i, = rows y_i = u_i - v_i.
inline Program dual(const Program& p) {
    Program d;
    std::vector<std::pair<std::size_t, double>> columns; // (row, sign)
    for (std::size_t i = 0; i < p.rows.size(); ++i) {
        switch (p.rows[i].sense) {
        case Sense::ge: columns.emplace_back(i, 1.0); break;
        case Sense::le: columns.emplace_back(i, -1.0); break;
        case Sense::eq:
            columns.emplace_back(i, 1.0);
            columns.emplace_back(i, -1.0);
            break;
        }
    }
    for (auto [i, sign] : columns)
        d.objective.push_back(-sign * p.rows[i].rhs);
    for (std::size_t j = 0; j < p.variables(); ++j) {
        Row r;
        r.sense = Sense::le;
        r.rhs = p.objective[j];
        for (auto [i, sign] : columns)
            r.coeffs.push_back(sign * p.rows[i].coeffs[j]);
        d.rows.push_back(std::move(r));
    }
    return d;
}

/// |primal optimum - dual optimum|, or infinity when either side is not optimal.
inline double duality_gap(const Program& p, const Solution& primal) {
    const auto d = solve(dual(p));
    if (primal.status != Status::optimal || d.status != Status::optimal)
        return std::numeric_limits<double>::infinity();
    return std::abs(primal.value + d.value);
}

} // namespace fraisse::lp
