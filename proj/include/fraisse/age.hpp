#pragma once

// Hereditary classes of finite structures given by per-symbol axioms and forbidden
// induced substructures, plus the built-in catalog of the standard examples.

#include <filesystem>
#include <string>
#include <vector>

#include "fraisse/embedding.hpp"
#include "fraisse/io.hpp"
#include "fraisse/structure.hpp"

namespace fraisse {

/// Universal axioms for one binary symbol.
struct Axioms {
    bool irreflexive = false;
    bool symmetric = false;
    bool antisymmetric = false;
    bool total = false; // x != y implies R(x,y) or R(y,x)
    bool transitive = false;

    [[nodiscard]] bool any() const { return irreflexive || symmetric || antisymmetric || total || transitive; }
    friend bool operator==(const Axioms&, const Axioms&) = default;
};

class AgeSpec {
public:
    AgeSpec() = default;

    AgeSpec(Signature signature, std::vector<Axioms> axioms, std::vector<Structure> forbidden, std::string name = {})
        : signature_(std::move(signature)), axioms_(std::move(axioms)), forbidden_(std::move(forbidden)),
          name_(std::move(name)) {
        if (axioms_.empty())
            axioms_.assign(signature_.size(), Axioms{});
        if (axioms_.size() != signature_.size())
            throw InputError("age: axiom list does not match signature");
        for (std::size_t s = 0; s < axioms_.size(); ++s) {
            const auto& ax = axioms_[s];
            if (ax.any() && signature_[s].arity != 2)
                throw InputError("age: axioms are only defined for binary symbols ('" + signature_[s].name + "')");
            if (ax.symmetric && ax.antisymmetric && ax.total)
                throw InputError("age: '" + signature_[s].name +
                                 "' cannot be symmetric, antisymmetric and total at once");
        }
        for (const auto& f : forbidden_)
            if (!(f.signature() == signature_))
                throw InputError("age: forbidden structure has a different signature");
    }

    [[nodiscard]] const Signature& signature() const { return signature_; }
    [[nodiscard]] const std::vector<Axioms>& axioms() const { return axioms_; }
    [[nodiscard]] const Axioms& axioms(std::size_t symbol) const { return axioms_[symbol]; }
    [[nodiscard]] const std::vector<Structure>& forbidden() const { return forbidden_; }
    [[nodiscard]] const std::string& name() const { return name_; }

private:
    Signature signature_;
    std::vector<Axioms> axioms_;
    std::vector<Structure> forbidden_;
    std::string name_;
};

namespace catalog {

inline AgeSpec set() { return AgeSpec(Signature{}, {}, {}, "set"); }

inline AgeSpec graph() {
    Axioms ax;
    ax.irreflexive = ax.symmetric = true;
    return AgeSpec(make::graph_signature(), {ax}, {}, "graph");
}

/// Finite K_n-free graphs.
inline AgeSpec graph_kfree(int n) {
    if (n < 2 || n > kMaxVertices)
        throw InputError("graph_kfree: clique size must be in 2.." + std::to_string(kMaxVertices));
    Axioms ax;
    ax.irreflexive = ax.symmetric = true;
    return AgeSpec(make::graph_signature(), {ax}, {make::complete_graph(n)}, "graph_kfree:" + std::to_string(n));
}

inline AgeSpec linear_order() {
    Axioms ax;
    ax.irreflexive = ax.antisymmetric = ax.total = ax.transitive = true;
    return AgeSpec(make::order_signature(), {ax}, {}, "linear_order");
}

inline AgeSpec tournament() {
    Axioms ax;
    ax.irreflexive = ax.antisymmetric = ax.total = true;
    return AgeSpec(Signature{{"arc", 2}}, {ax}, {}, "tournament");
}

/// Loopless directed graphs; 2-cycles allowed.
inline AgeSpec digraph() {
    Axioms ax;
    ax.irreflexive = true;
    return AgeSpec(Signature{{"arc", 2}}, {ax}, {}, "digraph");
}

inline bool is_catalog_name(const std::string& name) {
    return name == "set" || name == "graph" || name == "linear_order" || name == "tournament" ||
           name == "digraph" || name.rfind("graph_kfree:", 0) == 0;
}

inline AgeSpec by_name(const std::string& name) {
    if (name == "set")
        return set();
    if (name == "graph")
        return graph();
    if (name == "linear_order")
        return linear_order();
    if (name == "tournament")
        return tournament();
    if (name == "digraph")
        return digraph();
    if (name.rfind("graph_kfree:", 0) == 0) {
        const auto arg = name.substr(12);
        if (arg.empty() || arg.find_first_not_of("0123456789") != std::string::npos || arg.size() > 3)
            throw InputError("graph_kfree: bad clique size '" + arg + "'");
        return graph_kfree(std::stoi(arg));
    }
    throw InputError("unknown catalog age '" + name + "'");
}

} // namespace catalog

/// Checks the axioms of one binary symbol on a complete table.
inline bool satisfies_axioms(const Structure& s, std::size_t symbol, const Axioms& ax) {
    const int n = s.size();
    auto r = [&](int x, int y) { return s.holds(symbol, {x, y}); };
    for (int x = 0; x < n; ++x) {
        if (ax.irreflexive && r(x, x))
            return false;
        for (int y = 0; y < n; ++y) {
            if (x == y)
                continue;
            if (ax.symmetric && r(x, y) != r(y, x))
                return false;
            if (ax.antisymmetric && r(x, y) && r(y, x))
                return false;
            if (ax.total && !r(x, y) && !r(y, x))
                return false;
            if (ax.transitive && r(x, y))
                for (int z = 0; z < n; ++z)
                    if (r(y, z) && !r(x, z))
                        return false;
        }
    }
    return true;
}

inline bool satisfies_axioms(const AgeSpec& spec, const Structure& s) {
    for (std::size_t sym = 0; sym < spec.signature().size(); ++sym)
        if (spec.axioms(sym).any() && !satisfies_axioms(s, sym, spec.axioms(sym)))
            return false;
    return true;
}

inline bool member(const AgeSpec& spec, const Structure& s) {
    if (!(s.signature() == spec.signature()))
        throw InputError("member: signature mismatch");
    if (!satisfies_axioms(spec, s))
        return false;
    for (const auto& f : spec.forbidden())
        if (embeds(f, s))
            return false;
    return true;
}

// Age file format:
//
//   age: graph_kfree:3               (catalog entry; nothing else allowed)
//
// or an explicit class:
//
//   name: triangle_free              (optional)
//   signature: edge/2
//   axioms: edge irreflexive symmetric   (one line per constrained symbol)
//   forbidden: k3.st                 (paths relative to the age file; repeatable)
inline AgeSpec parse_age(std::string_view text, const std::filesystem::path& base_dir = {}) {
    std::optional<std::string> catalog_name;
    std::optional<Signature> signature;
    std::string name;
    std::vector<std::pair<int, std::string>> axiom_lines;
    std::vector<std::pair<int, std::string>> forbidden_paths;

    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        const auto raw = detail::trim_cr(text.substr(start, end - start));
        ++line_no;
        start = end + 1;
        if (!detail::is_blank_or_comment(raw)) {
            detail::LineCursor cur(raw, line_no);
            const auto key = cur.identifier();
            cur.expect(':');
            cur.skip_space();
            std::string rest(raw.substr(static_cast<std::size_t>(cur.column() - 1)));
            while (!rest.empty() && (rest.back() == ' ' || rest.back() == '\t'))
                rest.pop_back();
            if (key == "age") {
                if (rest.empty())
                    cur.fail("missing catalog name");
                catalog_name = rest;
            } else if (key == "name") {
                name = rest;
            } else if (key == "signature") {
                signature = parse_structure(std::string("signature: ") + rest + "\nsize: 1\n").signature();
            } else if (key == "axioms") {
                axiom_lines.emplace_back(line_no, rest);
            } else if (key == "forbidden") {
                std::istringstream ss(rest);
                std::string p;
                while (ss >> p)
                    forbidden_paths.emplace_back(line_no, p);
            } else {
                throw ParseError(line_no, 1, "unknown key '" + key + "'");
            }
        }
        if (end == text.size())
            break;
    }

    if (catalog_name) {
        if (signature || !axiom_lines.empty() || !forbidden_paths.empty())
            throw InputError("age: 'age:' cannot be combined with explicit sections");
        return catalog::by_name(*catalog_name);
    }
    if (!signature)
        throw InputError("age: missing 'age:' or 'signature:' line");

    std::vector<Axioms> axioms(signature->size());
    for (const auto& [ln, line] : axiom_lines) {
        std::istringstream ss(line);
        std::string sym;
        ss >> sym;
        const int idx = signature->find(sym);
        if (idx < 0)
            throw ParseError(ln, 1, "axioms for unknown symbol '" + sym + "'");
        auto& ax = axioms[static_cast<std::size_t>(idx)];
        std::string flag;
        while (ss >> flag) {
            if (flag == "irreflexive")
                ax.irreflexive = true;
            else if (flag == "symmetric")
                ax.symmetric = true;
            else if (flag == "antisymmetric")
                ax.antisymmetric = true;
            else if (flag == "total")
                ax.total = true;
            else if (flag == "transitive")
                ax.transitive = true;
            else
                throw ParseError(ln, 1, "unknown axiom '" + flag + "'");
        }
    }
    std::vector<Structure> forbidden;
    for (const auto& [ln, p] : forbidden_paths) {
        std::filesystem::path path(p);
        if (path.is_relative())
            path = base_dir / path;
        forbidden.push_back(load_structure(path.string()));
    }
    return AgeSpec(*signature, std::move(axioms), std::move(forbidden), name);
}

/// `--age` argument: a catalog name or a path to an age file.
inline AgeSpec load_age(const std::string& arg) {
    if (catalog::is_catalog_name(arg))
        return catalog::by_name(arg);
    const std::filesystem::path path(arg);
    if (!std::filesystem::exists(path))
        throw InputError("age '" + arg + "' is neither a catalog name nor an existing file");
    try {
        return parse_age(read_text_file(arg), path.parent_path());
    } catch (const ParseError& e) {
        throw InputError(arg + ": " + e.what());
    }
}

/// Short text form of an age, used in reports and certificates.
inline std::string describe_age(const AgeSpec& spec) {
    if (!spec.name().empty() && catalog::is_catalog_name(spec.name()))
        return spec.name();
    std::ostringstream out;
    out << (spec.name().empty() ? std::string("custom") : spec.name()) << '[' << serialize_signature(spec.signature());
    for (std::size_t s = 0; s < spec.signature().size(); ++s) {
        const auto& ax = spec.axioms(s);
        if (!ax.any())
            continue;
        out << "; " << spec.signature()[s].name << ':';
        if (ax.irreflexive) out << " irreflexive";
        if (ax.symmetric) out << " symmetric";
        if (ax.antisymmetric) out << " antisymmetric";
        if (ax.total) out << " total";
        if (ax.transitive) out << " transitive";
    }
    out << "; forbidden " << spec.forbidden().size() << ']';
    return out.str();
}

} // namespace fraisse
