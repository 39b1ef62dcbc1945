// Text syntax for bracket forms, and binding files.
//
//   expr   := term (('+'|'-') term)* ;
//   term   := factor ('*' factor)* ;
//   factor := '{' expr '}' | '(' expr ')' | '-' factor | atom ;
//   atom   := symbol | number | 'n' ('^' integer)? ;
//   symbol := 'a' integer ;
//   number := integer ('/' integer)? | decimal ;
//
// 'n' is the sole variable.  {x} denotes the fractional part in (-1/2, 1/2].
// Whitespace is ignored between tokens.  Adjacent purely-polynomial operands
// of '*', '+' and '-' are folded into a single polynomial-form node, so
// "a1*n + a2*n^2" parses to one Poly node while "{a1*n}*a2" keeps the
// product node.
//
// Binding files assign reals to symbols, one per line:
//
//   a1 = sqrt2        # named constants: sqrt2 sqrt3 sqrt5 pi phi
//   a2 = 22/7
//   a3 = -0.125
//
// Exact mode accepts only rationals and decimals; the named constants are
// irrational and rejected there.

#pragma once

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bracketlab/bracket.hpp"

namespace bracketlab {

struct ParseError : Error {
    std::size_t offset;
    std::vector<std::string> expected;

    ParseError(std::size_t off, std::vector<std::string> exp)
        : Error(build(off, exp)), offset(off), expected(std::move(exp)) {}

  private:
    static std::string build(std::size_t off, const std::vector<std::string>& exp) {
        std::string m = "syntax error at offset " + std::to_string(off);
        if (!exp.empty()) {
            m += "; expected ";
            for (std::size_t i = 0; i < exp.size(); ++i) {
                if (i) m += i + 1 == exp.size() ? " or " : ", ";
                m += exp[i];
            }
        }
        return m;
    }
};

// Composition helpers that keep trees in the parser-canonical shape: adjacent
// polynomial operands fold into a single Poly node, negation of a Poly folds
// into its term signs.  print_form round-trips exactly on trees built this
// way.

inline BracketForm combine_neg(const BracketForm& f) {
    if (f->kind == ExprKind::Poly) return make_poly(neg_poly_form(f->poly));
    return make_neg(f);
}

inline BracketForm combine_prod(BracketForm cur, BracketForm next) {
    if (cur->kind == ExprKind::Poly && next->kind == ExprKind::Poly)
        return make_poly(mul_poly_forms(cur->poly, next->poly));
    if (cur->kind == ExprKind::Prod && cur->b->kind == ExprKind::Poly &&
        next->kind == ExprKind::Poly) {
        return make_prod(cur->a, make_poly(mul_poly_forms(cur->b->poly, next->poly)));
    }
    return make_prod(std::move(cur), std::move(next));
}

inline BracketForm combine_sum(BracketForm cur, BracketForm next) {
    if (cur->kind == ExprKind::Poly && next->kind == ExprKind::Poly)
        return make_poly(add_poly_forms(cur->poly, next->poly));
    if (cur->kind == ExprKind::Sum && cur->b->kind == ExprKind::Poly &&
        next->kind == ExprKind::Poly) {
        return make_sum(cur->a, make_poly(add_poly_forms(cur->b->poly, next->poly)));
    }
    return make_sum(std::move(cur), std::move(next));
}

namespace detail {

class FormParser {
  public:
    explicit FormParser(std::string_view text) : text_(text) {}

    BracketForm parse() {
        BracketForm f = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) fail({"'+'", "'-'", "'*'", "end of input"});
        return f;
    }

  private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(std::vector<std::string> expected) {
        throw ParseError(pos_, std::move(expected));
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    long long parse_integer() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start) fail({"integer"});
        return std::stoll(std::string(text_.substr(start, pos_ - start)));
    }

    // number := integer ('/' integer)? | decimal
    Rational parse_number() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            std::size_t frac_start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (pos_ == frac_start) fail({"digit after '.'"});
            return rational_from_string(std::string(text_.substr(start, pos_ - start)));
        }
        Rational num = rational_from_string(std::string(text_.substr(start, pos_ - start)));
        if (pos_ < text_.size() && text_[pos_] == '/') {
            ++pos_;
            std::size_t den_start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (pos_ == den_start) fail({"integer denominator"});
            Rational den = rational_from_string(std::string(text_.substr(den_start, pos_ - den_start)));
            if (den == 0) {
                pos_ = den_start;
                fail({"nonzero denominator"});
            }
            Rational r = num / den;
            r.canonicalize();
            return r;
        }
        return num;
    }

    // atom := symbol | number | 'n' ('^' integer)?
    BracketForm parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail({"symbol", "number", "'n'", "'('", "'{'", "'-'"});
        char c = text_[pos_];
        if (c == 'a') {
            ++pos_;
            if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
                fail({"symbol index"});
            long long idx = parse_integer();
            if (idx < 1) fail({"symbol index >= 1"});
            return make_poly(PolynomialForm(
                MonomialForm(+1, Rational(1), {static_cast<int>(idx)}, 0)));
        }
        if (c == 'n') {
            ++pos_;
            int power = 1;
            if (pos_ < text_.size() && text_[pos_] == '^') {
                ++pos_;
                long long k = parse_integer();
                if (k < 0) fail({"power >= 0"});
                power = static_cast<int>(k);
            }
            return make_poly(PolynomialForm(MonomialForm(+1, Rational(1), {}, power)));
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Rational v = parse_number();
            return make_poly(PolynomialForm(MonomialForm(+1, v, {}, 0)));
        }
        fail({"symbol", "number", "'n'", "'('", "'{'", "'-'"});
    }

    BracketForm parse_factor() {
        skip_ws();
        if (eat('{')) {
            BracketForm inner = parse_expr();
            if (!eat('}')) fail({"'}'"});
            return make_frac(inner);
        }
        if (eat('(')) {
            BracketForm inner = parse_expr();
            if (!eat(')')) fail({"')'"});
            return inner;
        }
        if (eat('-')) return combine_neg(parse_factor());
        return parse_atom();
    }

    BracketForm parse_term() {
        BracketForm cur = parse_factor();
        while (eat('*')) cur = combine_prod(std::move(cur), parse_factor());
        return cur;
    }

    BracketForm parse_expr() {
        BracketForm cur = parse_term();
        for (;;) {
            skip_ws();
            if (eat('+')) {
                cur = combine_sum(std::move(cur), parse_term());
            } else if (eat('-')) {
                cur = combine_sum(std::move(cur), combine_neg(parse_term()));
            } else {
                return cur;
            }
        }
    }
};

}  // namespace detail

inline BracketForm parse_form(std::string_view text) {
    return detail::FormParser(text).parse();
}

// Symbols occurring in a form, sorted ascending.
inline std::vector<int> symbols_of(const BracketForm& f) {
    std::vector<int> out;
    auto visit = [&](auto&& self, const BracketForm& e) -> void {
        if (e->kind == ExprKind::Poly) {
            for (const auto& t : e->poly.terms)
                out.insert(out.end(), t.symbols.begin(), t.symbols.end());
            return;
        }
        self(self, e->a);
        if (e->b) self(self, e->b);
    };
    visit(visit, f);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// --- binding files ------------------------------------------------------------

namespace detail {

inline bool parse_binding_line(const std::string& raw, int& sym, std::string& value) {
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream in(line);
    std::string lhs, eq;
    if (!(in >> lhs)) return false;  // blank
    if (!(in >> eq) || eq != "=" || !(in >> value))
        throw Error("malformed binding line: '" + raw + "'");
    std::string rest;
    if (in >> rest) throw Error("trailing junk in binding line: '" + raw + "'");
    if (lhs.size() < 2 || lhs[0] != 'a')
        throw Error("binding target must be a symbol a<k>: '" + lhs + "'");
    try {
        sym = std::stoi(lhs.substr(1));
    } catch (const std::exception&) {
        throw Error("binding target must be a symbol a<k>: '" + lhs + "'");
    }
    if (sym < 1) throw Error("symbol indices start at 1: '" + lhs + "'");
    return true;
}

}  // namespace detail

inline Binding<double> parse_binding_text_float(const std::string& text) {
    Binding<double> b;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        int sym;
        std::string value;
        if (!detail::parse_binding_line(line, sym, value)) continue;
        double named;
        if (named_constant(value, named)) {
            b[sym] = named;
        } else {
            b[sym] = to_double(rational_from_string(value));
        }
    }
    return b;
}

inline Binding<Rational> parse_binding_text_exact(const std::string& text) {
    Binding<Rational> b;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        int sym;
        std::string value;
        if (!detail::parse_binding_line(line, sym, value)) continue;
        double ignored;
        if (named_constant(value, ignored))
            throw Error("exact mode rejects the irrational constant '" + value + "'");
        b[sym] = rational_from_string(value);
    }
    return b;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace bracketlab
