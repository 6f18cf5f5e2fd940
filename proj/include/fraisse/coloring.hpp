#pragma once

// Colorings of embedding sets Binom(U, A): one value per embedding, either a color index
// (Coloring<int>) or a real number in [0, 1] (Coloring<double>).

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fraisse/embedding.hpp"
#include "fraisse/io.hpp"

namespace fraisse {

/// Absolute tolerance for every real comparison.
inline constexpr double kTolerance = 1e-9;

/// x < eps with the shared tolerance.
inline bool strictly_below(double x, double eps) { return x < eps - kTolerance; }

template <class Value>
class Coloring {
public:
    Coloring() = default;
    Coloring(std::vector<Embedding> domain, std::vector<Value> values)
        : domain_(std::move(domain)), values_(std::move(values)) {
        if (domain_.size() != values_.size())
            throw InputError("coloring: domain and values differ in length");
        for (std::size_t i = 0; i < domain_.size(); ++i)
            if (!index_.emplace(domain_[i].map, i).second)
                throw InputError("coloring: repeated embedding in the domain");
    }

    [[nodiscard]] const std::vector<Embedding>& domain() const { return domain_; }
    [[nodiscard]] const std::vector<Value>& values() const { return values_; }
    [[nodiscard]] std::size_t size() const { return domain_.size(); }

    [[nodiscard]] bool contains(const VertexMap& m) const { return index_.contains(m); }
    [[nodiscard]] std::size_t index(const VertexMap& m) const {
        auto it = index_.find(m);
        if (it == index_.end())
            throw InputError("coloring: embedding outside the domain");
        return it->second;
    }
    [[nodiscard]] const Value& operator()(const VertexMap& m) const { return values_[index(m)]; }
    [[nodiscard]] const Value& operator()(const Embedding& e) const { return (*this)(e.map); }

private:
    std::vector<Embedding> domain_;
    std::vector<Value> values_;
    std::map<VertexMap, std::size_t> index_;
};

/// Values of `chi` on Binom(A, b(B)) listed as b∘a for a in `inner` = embeddings(A, B).
template <class Value>
std::vector<Value> restrict_along(const Coloring<Value>& chi, const Embedding& b, const std::vector<Embedding>& inner) {
    std::vector<Value> out;
    out.reserve(inner.size());
    for (const auto& a : inner)
        out.push_back(chi(compose(b, a)));
    return out;
}

inline double oscillation(const std::vector<double>& values) {
    if (values.empty())
        return 0.0;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return *hi - *lo;
}

template <class Value>
bool is_constant(const std::vector<Value>& values) {
    return std::all_of(values.begin(), values.end(), [&](const Value& v) { return v == values.front(); });
}

inline bool is_constant(const std::vector<double>& values) { return oscillation(values) <= kTolerance; }

/// Coloring file: one line per embedding, `(v0,v1,...) value`; `#` comments and blank lines ignored.
/// Every embedding of A into U must appear exactly once.
inline Coloring<double> parse_coloring(std::string_view text, const Structure& a, const Structure& u) {
    auto domain = embeddings(a, u);
    std::map<VertexMap, std::size_t> pos;
    for (std::size_t i = 0; i < domain.size(); ++i)
        pos.emplace(domain[i].map, i);
    std::vector<double> values(domain.size(), 0.0);
    std::vector<bool> seen(domain.size(), false);
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        ++line_no;
        const auto line = detail::trim_cr(text.substr(start, end - start));
        start = end + 1;
        if (detail::is_blank_or_comment(line))
            continue;
        detail::LineCursor cur(line, line_no);
        cur.expect('(');
        VertexMap m;
        cur.skip_space();
        if (cur.peek() != ')') {
            for (;;) {
                m.push_back(static_cast<Vertex>(cur.integer()));
                cur.skip_space();
                if (cur.peek() == ')')
                    break;
                cur.expect(',');
            }
        }
        cur.expect(')');
        cur.skip_space();
        const int col = cur.column();
        const auto rest = line.substr(static_cast<std::size_t>(col - 1));
        std::string token(rest);
        while (!token.empty() && (token.back() == ' ' || token.back() == '\t'))
            token.pop_back();
        double v = 0.0;
        const auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (token.empty() || ec != std::errc{} || p != token.data() + token.size() || !std::isfinite(v))
            throw ParseError(line_no, col, "coloring: expected a numeric value");
        auto it = pos.find(m);
        if (it == pos.end())
            throw ParseError(line_no, 1, "coloring: not an embedding of A into U");
        if (seen[it->second])
            throw ParseError(line_no, 1, "coloring: embedding listed twice");
        seen[it->second] = true;
        values[it->second] = v;
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (!seen[i])
            throw InputError("coloring: missing a value for an embedding of A into U");
    return Coloring<double>(std::move(domain), std::move(values));
}

template <class Value>
std::string serialize_coloring(const Coloring<Value>& chi) {
    std::string out;
    for (std::size_t i = 0; i < chi.size(); ++i) {
        out += '(';
        const auto& m = chi.domain()[i].map;
        for (std::size_t k = 0; k < m.size(); ++k) {
            if (k)
                out += ',';
            out += std::to_string(m[k]);
        }
        out += ") ";
        if constexpr (std::is_floating_point_v<Value>) {
            char buf[32];
            const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, chi.values()[i]);
            out.append(buf, p);
        } else {
            out += std::to_string(chi.values()[i]);
        }
        out += '\n';
    }
    return out;
}

} // namespace fraisse
