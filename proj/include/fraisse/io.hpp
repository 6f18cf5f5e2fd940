#pragma once

// Structure file format.
//
//   # comment lines start with '#'
//   signature: edge/2 lt/2        (space separated name/arity tokens; may be empty)
//   size: 3
//   edge: (0,1) (1,0)             (one line per symbol, tuples in parentheses)
//   lt:                           (empty relation)
//
// The signature line must precede the size line, which must precede relation lines.
// Omitted relation lines denote empty relations. Names match [A-Za-z_][A-Za-z0-9_]*.
// serialize_structure() emits the normal form: every symbol listed in signature order,
// tuples in lexicographic order, duplicates dropped, single spaces, trailing newline.

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "fraisse/structure.hpp"

namespace fraisse {

class ParseError : public InputError {
public:
    ParseError(int line, int column, const std::string& what)
        : InputError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}

    [[nodiscard]] int line() const { return line_; }
    [[nodiscard]] int column() const { return column_; }

private:
    int line_;
    int column_;
};

namespace detail {

class LineCursor {
public:
    LineCursor(std::string_view text, int line) : text_(text), line_(line) {}

    [[nodiscard]] bool done() { skip_space(); return pos_ >= text_.size(); }
    [[nodiscard]] int column() const { return static_cast<int>(pos_) + 1; }
    [[nodiscard]] char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void skip_space() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t'))
            ++pos_;
    }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, column(), what); }

    void expect(char c) {
        skip_space();
        if (peek() != c)
            fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    std::string identifier() {
        skip_space();
        const auto start = pos_;
        if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        else
            fail("expected identifier");
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    long integer() {
        skip_space();
        const auto start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (start == pos_)
            fail("expected non-negative integer");
        if (pos_ - start > 9)
            fail("integer too large");
        return std::stol(std::string(text_.substr(start, pos_ - start)));
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    int line_;
};

inline std::string_view trim_cr(std::string_view s) {
    if (!s.empty() && s.back() == '\r')
        s.remove_suffix(1);
    return s;
}

inline bool is_blank_or_comment(std::string_view s) {
    for (char c : s) {
        if (c == ' ' || c == '\t')
            continue;
        return c == '#';
    }
    return true;
}

} // namespace detail

inline Structure parse_structure(std::string_view text) {
    std::optional<Signature> signature;
    int size = -1;
    std::vector<std::vector<Tuple>> relations;
    std::vector<bool> seen_symbol;

    int line_no = 0;
    int last_line = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        const auto raw = detail::trim_cr(text.substr(start, end - start));
        ++line_no;
        start = end + 1;
        if (detail::is_blank_or_comment(raw))
            continue;
        last_line = line_no;
        detail::LineCursor cur(raw, line_no);
        const auto key_col = (cur.skip_space(), cur.column());
        const auto key = cur.identifier();
        cur.expect(':');

        if (key == "signature") {
            if (signature)
                throw ParseError(line_no, key_col, "duplicate signature line");
            std::vector<Symbol> syms;
            while (!cur.done()) {
                const int col = cur.column();
                auto name = cur.identifier();
                cur.expect('/');
                const long arity = cur.integer();
                if (arity < 1 || arity > kMaxArity)
                    throw ParseError(line_no, col, "arity of '" + name + "' must be in 1.." + std::to_string(kMaxArity));
                for (const auto& s : syms)
                    if (s.name == name)
                        throw ParseError(line_no, col, "duplicate symbol '" + name + "'");
                syms.push_back({std::move(name), static_cast<int>(arity)});
            }
            signature = Signature(std::move(syms));
            relations.assign(signature->size(), {});
            seen_symbol.assign(signature->size(), false);
        } else if (key == "size") {
            if (!signature)
                throw ParseError(line_no, key_col, "size line before signature line");
            if (size >= 0)
                throw ParseError(line_no, key_col, "duplicate size line");
            const int col = (cur.skip_space(), cur.column());
            const long n = cur.integer();
            if (n < 1)
                throw ParseError(line_no, col, "size must be at least 1");
            if (n > kMaxVertices)
                throw ParseError(line_no, col, "size exceeds the limit of " + std::to_string(kMaxVertices));
            if (!cur.done())
                cur.fail("unexpected trailing text");
            size = static_cast<int>(n);
        } else {
            if (!signature)
                throw ParseError(line_no, key_col, "relation line before signature line");
            if (size < 0)
                throw ParseError(line_no, key_col, "relation line before size line");
            const int sym = signature->find(key);
            if (sym < 0)
                throw ParseError(line_no, key_col, "unknown symbol '" + key + "'");
            if (seen_symbol[static_cast<std::size_t>(sym)])
                throw ParseError(line_no, key_col, "duplicate line for symbol '" + key + "'");
            seen_symbol[static_cast<std::size_t>(sym)] = true;
            const int arity = (*signature)[static_cast<std::size_t>(sym)].arity;
            while (!cur.done()) {
                const int tcol = cur.column();
                cur.expect('(');
                Tuple t;
                for (;;) {
                    const int vcol = (cur.skip_space(), cur.column());
                    const long v = cur.integer();
                    if (v >= size)
                        throw ParseError(line_no, vcol, "vertex " + std::to_string(v) + " out of range for size " +
                                                            std::to_string(size));
                    t.push_back(static_cast<Vertex>(v));
                    cur.skip_space();
                    if (cur.peek() == ',') {
                        cur.expect(',');
                        continue;
                    }
                    cur.expect(')');
                    break;
                }
                if (static_cast<int>(t.size()) != arity)
                    throw ParseError(line_no, tcol, "tuple has " + std::to_string(t.size()) + " entries but '" + key +
                                                        "' has arity " + std::to_string(arity));
                relations[static_cast<std::size_t>(sym)].push_back(std::move(t));
            }
        }
        if (end == text.size())
            break;
    }
    if (!signature)
        throw ParseError(last_line + 1, 1, "missing signature line");
    if (size < 0)
        throw ParseError(last_line + 1, 1, "missing size line");
    return Structure(*signature, size, relations);
}

inline std::string serialize_signature(const Signature& sig) {
    std::string out = "signature:";
    for (const auto& s : sig)
        out += " " + s.name + "/" + std::to_string(s.arity);
    return out;
}

inline std::string serialize_structure(const Structure& s) {
    std::ostringstream out;
    out << serialize_signature(s.signature()) << '\n';
    out << "size: " << s.size() << '\n';
    for (std::size_t sym = 0; sym < s.signature().size(); ++sym) {
        out << s.signature()[sym].name << ':';
        for (const auto& t : s.tuples(sym)) {
            out << " (";
            for (std::size_t i = 0; i < t.size(); ++i)
                out << (i ? "," : "") << t[i];
            out << ')';
        }
        out << '\n';
    }
    return out.str();
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Structure load_structure(const std::string& path) {
    try {
        return parse_structure(read_text_file(path));
    } catch (const ParseError& e) {
        throw InputError(path + ": " + e.what());
    }
}

} // namespace fraisse
