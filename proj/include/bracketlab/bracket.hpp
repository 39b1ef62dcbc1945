// Bracket forms and bracket polynomials.
//
// Both are the same expression tree over five node kinds
//
//     Poly(p) | Neg(a) | Frac(a) | Sum(a, b) | Prod(a, b)
//
// differing only in the payload of Poly nodes: a BracketForm holds symbolic
// PolynomialForms, a BracketPoly<R> holds realized polynomials with scalar
// coefficients.  Nodes are immutable and shared; every constructor caches the
// recursive degree bound (Prod adds, Sum maxes, Neg/Frac preserve) and the
// constant-free flag.
//
// realize() substitutes a binding of symbol -> scalar and preserves the tree
// shape exactly.  components() returns the set C(phi) of inner expressions nu
// appearing as {nu}, deduplicated by structural equality in post-order
// first-occurrence order.  Callers that need the bracketed values apply frac
// to the returned expressions themselves.

#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bracketlab/forms.hpp"

namespace bracketlab {

enum class ExprKind { Poly, Neg, Frac, Sum, Prod };

template <class P>
struct ExprNode {
    using Ptr = std::shared_ptr<const ExprNode>;

    ExprKind kind;
    P poly;        // Poly nodes only
    Ptr a, b;      // Neg/Frac use a; Sum/Prod use a and b
    int degree_bound = 0;
    bool constant_free = true;
};

template <class P>
using ExprPtr = std::shared_ptr<const ExprNode<P>>;

using BracketForm = ExprPtr<PolynomialForm>;

template <class R>
using BracketPoly = ExprPtr<RealizedPoly<R>>;

template <class R>
using Binding = std::map<int, R>;

struct MissingBindingError : Error {
    int symbol;
    explicit MissingBindingError(int sym)
        : Error("no binding for symbol a" + std::to_string(sym)), symbol(sym) {}
};

// --- constructors ------------------------------------------------------------

template <class P>
ExprPtr<P> make_poly(P p) {
    auto n = std::make_shared<ExprNode<P>>();
    n->kind = ExprKind::Poly;
    n->degree_bound = p.degree();
    n->constant_free = p.constant_free();
    n->poly = std::move(p);
    return n;
}

template <class P>
ExprPtr<P> make_neg(ExprPtr<P> a) {
    auto n = std::make_shared<ExprNode<P>>();
    n->kind = ExprKind::Neg;
    n->degree_bound = a->degree_bound;
    n->constant_free = a->constant_free;
    n->a = std::move(a);
    return n;
}

template <class P>
ExprPtr<P> make_frac(ExprPtr<P> a) {
    auto n = std::make_shared<ExprNode<P>>();
    n->kind = ExprKind::Frac;
    n->degree_bound = a->degree_bound;
    n->constant_free = a->constant_free;
    n->a = std::move(a);
    return n;
}

template <class P>
ExprPtr<P> make_sum(ExprPtr<P> a, ExprPtr<P> b) {
    auto n = std::make_shared<ExprNode<P>>();
    n->kind = ExprKind::Sum;
    n->degree_bound = std::max(a->degree_bound, b->degree_bound);
    n->constant_free = a->constant_free && b->constant_free;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

template <class P>
ExprPtr<P> make_prod(ExprPtr<P> a, ExprPtr<P> b) {
    auto n = std::make_shared<ExprNode<P>>();
    n->kind = ExprKind::Prod;
    n->degree_bound = a->degree_bound + b->degree_bound;
    n->constant_free = a->constant_free && b->constant_free;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

// --- structural equality ------------------------------------------------------

template <class P>
bool equal_exprs(const ExprPtr<P>& x, const ExprPtr<P>& y) {
    if (x.get() == y.get()) return true;
    if (x->kind != y->kind) return false;
    switch (x->kind) {
        case ExprKind::Poly: return x->poly == y->poly;
        case ExprKind::Neg:
        case ExprKind::Frac: return equal_exprs(x->a, y->a);
        case ExprKind::Sum:
        case ExprKind::Prod:
            return equal_exprs(x->a, y->a) && equal_exprs(x->b, y->b);
    }
    return false;
}

// --- degree bound --------------------------------------------------------------

template <class P>
int degree_bound(const ExprPtr<P>& e) {
    return e->degree_bound;
}

// --- bracket components ---------------------------------------------------------

template <class P>
void collect_components(const ExprPtr<P>& e, std::vector<ExprPtr<P>>& out) {
    switch (e->kind) {
        case ExprKind::Poly:
            return;
        case ExprKind::Neg:
            collect_components(e->a, out);
            return;
        case ExprKind::Frac: {
            collect_components(e->a, out);
            for (const auto& seen : out)
                if (equal_exprs(seen, e->a)) return;
            out.push_back(e->a);
            return;
        }
        case ExprKind::Sum:
        case ExprKind::Prod:
            collect_components(e->a, out);
            collect_components(e->b, out);
            return;
    }
}

template <class P>
std::vector<ExprPtr<P>> components(const ExprPtr<P>& e) {
    std::vector<ExprPtr<P>> out;
    collect_components(e, out);
    return out;
}

// --- realization -----------------------------------------------------------------

template <class R>
RealizedPoly<R> realize_poly_form(const PolynomialForm& p, const Binding<R>& b) {
    RealizedPoly<R> out;
    out.terms.reserve(p.terms.size());
    for (const auto& t : p.terms) {
        R v = scalar_from_int<R>(t.sign);
        if constexpr (std::is_same_v<R, double>) {
            v *= to_double(t.coeff);
        } else {
            v = R(v * t.coeff);
        }
        for (int sym : t.symbols) {
            auto it = b.find(sym);
            if (it == b.end()) throw MissingBindingError(sym);
            v = R(v * it->second);
        }
        out.terms.push_back({v, t.power});
    }
    return out;
}

template <class R>
BracketPoly<R> realize(const BracketForm& f, const Binding<R>& b) {
    switch (f->kind) {
        case ExprKind::Poly: return make_poly(realize_poly_form(f->poly, b));
        case ExprKind::Neg:  return make_neg(realize(f->a, b));
        case ExprKind::Frac: return make_frac(realize(f->a, b));
        case ExprKind::Sum:  return make_sum(realize(f->a, b), realize(f->b, b));
        case ExprKind::Prod: return make_prod(realize(f->a, b), realize(f->b, b));
    }
    throw Error("corrupt expression node");
}

// --- evaluation -------------------------------------------------------------------

template <class R>
R eval(const BracketPoly<R>& p, long long n) {
    switch (p->kind) {
        case ExprKind::Poly: return p->poly.eval(n);
        case ExprKind::Neg:  return R(-eval(p->a, n));
        case ExprKind::Frac: return frac(eval(p->a, n));
        case ExprKind::Sum:  return R(eval(p->a, n) + eval(p->b, n));
        case ExprKind::Prod: return R(eval(p->a, n) * eval(p->b, n));
    }
    throw Error("corrupt expression node");
}

// --- printing ----------------------------------------------------------------------

// Canonical text form: parse(print(f)) is structurally equal to f for every
// tree the parser can produce.  Parenthesization restores grouping that the
// grammar's left-associative defaults would otherwise lose.

inline std::string print_monomial(const MonomialForm& m, bool with_sign) {
    std::string s;
    if (with_sign && m.sign < 0) s += "-";
    bool coeff_shown = m.coeff != 1 || (m.symbols.empty() && m.power == 0);
    bool star = false;
    if (coeff_shown) {
        s += to_string(m.coeff);
        star = true;
    }
    for (int sym : m.symbols) {
        if (star) s += "*";
        s += "a" + std::to_string(sym);
        star = true;
    }
    if (m.power > 0) {
        if (star) s += "*";
        s += "n";
        if (m.power > 1) s += "^" + std::to_string(m.power);
    }
    return s;
}

inline std::string print_poly_form(const PolynomialForm& p) {
    if (p.terms.empty()) return "0";
    std::string s = print_monomial(p.terms.front(), /*with_sign=*/true);
    for (std::size_t i = 1; i < p.terms.size(); ++i) {
        s += p.terms[i].sign < 0 ? " - " : " + ";
        s += print_monomial(p.terms[i], /*with_sign=*/false);
    }
    return s;
}

namespace detail {

// True when a node prints as something that must be parenthesized inside a
// product or under a prefix minus.
inline bool poly_needs_parens(const PolynomialForm& p) {
    return p.terms.size() != 1 || p.terms.front().sign < 0;
}

inline std::string print_form_node(const BracketForm& f, bool as_factor);

inline std::string print_form_sum(const BracketForm& f) {
    // Right operand of a parsed Sum is never itself a Sum; reproduce the
    // "a + b - c" spelling and parenthesize anything that is not.
    if (f->kind != ExprKind::Sum) return print_form_node(f, false);
    std::string s = print_form_sum(f->a);
    const BracketForm& r = f->b;
    if (r->kind == ExprKind::Poly) {
        const auto& terms = r->poly.terms;
        if (terms.empty()) return s + " + 0";
        for (const auto& t : terms) {
            s += t.sign < 0 ? " - " : " + ";
            s += print_monomial(t, /*with_sign=*/false);
        }
        return s;
    }
    if (r->kind == ExprKind::Neg) return s + " - " + print_form_node(r->a, true);
    return s + " + " + print_form_node(r, true);
}

inline std::string print_form_node(const BracketForm& f, bool as_factor) {
    switch (f->kind) {
        case ExprKind::Poly: {
            std::string body = print_poly_form(f->poly);
            if (as_factor && poly_needs_parens(f->poly)) return "(" + body + ")";
            return body;
        }
        case ExprKind::Frac:
            return "{" + print_form_sum(f->a) + "}";
        case ExprKind::Neg: {
            std::string body = "-" + print_form_node(f->a, true);
            if (as_factor) return "(" + body + ")";
            return body;
        }
        case ExprKind::Prod: {
            std::string s = print_form_node(f->a, true) + "*" + print_form_node(f->b, true);
            if (as_factor) return "(" + s + ")";
            return s;
        }
        case ExprKind::Sum: {
            std::string body = print_form_sum(f);
            if (as_factor) return "(" + body + ")";
            return body;
        }
    }
    throw Error("corrupt expression node");
}

}  // namespace detail

inline std::string print_form(const BracketForm& f) {
    return detail::print_form_sum(f);
}

// Human-readable rendering of a realized tree (not reparseable; used in
// reports and witnesses).
template <class R>
std::string describe(const BracketPoly<R>& p) {
    switch (p->kind) {
        case ExprKind::Poly: {
            std::string s;
            for (std::size_t i = 0; i < p->poly.terms.size(); ++i) {
                const auto& t = p->poly.terms[i];
                if (i) s += " + ";
                if constexpr (std::is_same_v<R, double>) {
                    s += std::to_string(t.value);
                } else {
                    s += to_string(t.value);
                }
                if (t.power > 0) {
                    s += "*n";
                    if (t.power > 1) s += "^" + std::to_string(t.power);
                }
            }
            return s.empty() ? "0" : s;
        }
        case ExprKind::Neg:  return "-(" + describe(p->a) + ")";
        case ExprKind::Frac: return "{" + describe(p->a) + "}";
        case ExprKind::Sum:  return "(" + describe(p->a) + " + " + describe(p->b) + ")";
        case ExprKind::Prod: return "(" + describe(p->a) + ")*(" + describe(p->b) + ")";
    }
    throw Error("corrupt expression node");
}

}  // namespace bracketlab
