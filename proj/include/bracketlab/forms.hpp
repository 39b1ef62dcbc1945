// The formal ring of polynomial forms.
//
// A monomial form is a signed string  +- c * a_{i1} ... a_{it} * n^k  over an
// alphabet of symbols a1, a2, ...; the symbol list is kept sorted so each
// monomial has one canonical spelling.  A polynomial form is a list of
// monomial forms.  There is no cancellation or collection of like terms:
// forms are formal strings, and canonicalization is limited to ordering.
//
// Multiplication distributes over addition, merges symbol multisets, adds
// powers and multiplies signs ((+.+) = (-.-) = +).

#pragma once

#include <algorithm>
#include <compare>
#include <vector>

#include "bracketlab/scalar.hpp"

namespace bracketlab {

struct MonomialForm {
    int sign = +1;                 // +1 or -1
    Rational coeff{1};             // canonical: coeff >= 0, sign carries negativity
    std::vector<int> symbols;      // sorted ascending, indices >= 1
    int power = 0;                 // exponent of n, >= 0

    MonomialForm() = default;

    MonomialForm(int sign_, Rational coeff_, std::vector<int> symbols_, int power_)
        : sign(sign_), coeff(std::move(coeff_)), symbols(std::move(symbols_)), power(power_) {
        if (coeff < 0) {
            coeff = -coeff;
            sign = -sign;
        }
        std::sort(symbols.begin(), symbols.end());
    }

    bool constant_free() const { return power != 0; }

    friend MonomialForm operator*(const MonomialForm& a, const MonomialForm& b) {
        MonomialForm out;
        out.sign = a.sign * b.sign;
        out.coeff = a.coeff * b.coeff;
        out.symbols.reserve(a.symbols.size() + b.symbols.size());
        std::merge(a.symbols.begin(), a.symbols.end(),
                   b.symbols.begin(), b.symbols.end(),
                   std::back_inserter(out.symbols));
        out.power = a.power + b.power;
        return out;
    }

    friend bool operator==(const MonomialForm& a, const MonomialForm& b) {
        return a.sign == b.sign && a.power == b.power &&
               a.symbols == b.symbols && a.coeff == b.coeff;
    }

    // Term order for canonicalization: (power, symbols, sign, coeff).
    friend bool operator<(const MonomialForm& a, const MonomialForm& b) {
        if (a.power != b.power) return a.power < b.power;
        if (a.symbols != b.symbols) return a.symbols < b.symbols;
        if (a.sign != b.sign) return a.sign > b.sign;  // '+' before '-'
        return a.coeff < b.coeff;
    }
};

struct PolynomialForm {
    std::vector<MonomialForm> terms;

    PolynomialForm() = default;
    explicit PolynomialForm(MonomialForm m) { terms.push_back(std::move(m)); }

    void canonicalize() { std::stable_sort(terms.begin(), terms.end()); }

    int degree() const {
        int d = 0;
        for (const auto& t : terms) d = std::max(d, t.power);
        return d;
    }

    bool constant_free() const {
        for (const auto& t : terms)
            if (!t.constant_free()) return false;
        return true;
    }

    // Largest symbol index appearing, 0 when symbol-free.
    int max_symbol() const {
        int m = 0;
        for (const auto& t : terms)
            if (!t.symbols.empty()) m = std::max(m, t.symbols.back());
        return m;
    }

    friend bool operator==(const PolynomialForm& a, const PolynomialForm& b) {
        return a.terms == b.terms;
    }
};

inline PolynomialForm add_poly_forms(const PolynomialForm& a, const PolynomialForm& b) {
    PolynomialForm out;
    out.terms = a.terms;
    out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
    out.canonicalize();
    return out;
}

inline PolynomialForm neg_poly_form(const PolynomialForm& a) {
    PolynomialForm out = a;
    for (auto& t : out.terms) t.sign = -t.sign;
    out.canonicalize();
    return out;
}

inline PolynomialForm mul_poly_forms(const PolynomialForm& a, const PolynomialForm& b) {
    PolynomialForm out;
    out.terms.reserve(a.terms.size() * b.terms.size());
    for (const auto& x : a.terms)
        for (const auto& y : b.terms) out.terms.push_back(x * y);
    out.canonicalize();
    return out;
}

// A realized polynomial: each monomial's sign, coefficient and symbol values
// collapsed into one scalar, preserving the term list of the source form.
template <class R>
struct RealizedPoly {
    struct Term {
        R value;
        int power;
        friend bool operator==(const Term& a, const Term& b) {
            return a.power == b.power && a.value == b.value;
        }
    };
    std::vector<Term> terms;

    int degree() const {
        int d = 0;
        for (const auto& t : terms) d = std::max(d, t.power);
        return d;
    }

    bool constant_free() const {
        for (const auto& t : terms)
            if (t.power == 0) return false;
        return true;
    }

    R eval(long long n) const {
        const R x = scalar_from_int<R>(n);
        R acc = scalar_from_int<R>(0);
        for (const auto& t : terms) {
            R p = scalar_from_int<R>(1);
            for (int i = 0; i < t.power; ++i) p = R(p * x);
            acc = R(acc + t.value * p);
        }
        return acc;
    }

    friend bool operator==(const RealizedPoly& a, const RealizedPoly& b) {
        return a.terms == b.terms;
    }
};

}  // namespace bracketlab
