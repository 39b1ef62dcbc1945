// Scalar layer: the library runs in one of two numeric modes.
//
//   float mode  — IEEE double, the default for orbit experiments with
//                 irrational data such as sqrt(2).
//   exact mode  — arbitrary-precision rationals (GMP mpq), used wherever a
//                 test wants exact equality instead of a tolerance.
//
// Every algorithm in the library is templated on the scalar type R and calls
// the unqualified helpers below (frac, int_part, to_double, ...), so both
// modes share one code path.
//
// The fractional part convention used throughout is {x} in (-1/2, 1/2] and
// [x] := x - {x}.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace bracketlab {

using Rational = mpq_class;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- double mode -----------------------------------------------------------

// {x} in (-1/2, 1/2]:  frac(0.5) = 0.5, frac(0.6) = -0.4, frac(-0.5) = 0.5.
inline double frac(double x) { return x - std::ceil(x - 0.5); }

// [x] := x - {x}; always an integer value.
inline double int_part(double x) { return std::ceil(x - 0.5); }

inline double to_double(double x) { return x; }

inline bool is_integer_value(double x, double tol = 1e-8) {
    return std::abs(x - std::round(x)) <= tol;
}

// --- exact mode -------------------------------------------------------------

inline mpz_class rat_ceil(const Rational& x) {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
}

inline mpz_class rat_floor(const Rational& x) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
}

inline Rational frac(const Rational& x) {
    Rational shifted = x - Rational(1, 2);
    return x - Rational(rat_ceil(shifted));
}

inline Rational int_part(const Rational& x) {
    return Rational(rat_ceil(x - Rational(1, 2)));
}

inline double to_double(const Rational& x) { return x.get_d(); }

inline bool is_integer_value(const Rational& x, double = 0.0) {
    return x.get_den() == 1;
}

// Smallest canonical rational from a numerator/denominator pair.
inline Rational make_rational(long long num, long long den) {
    if (den == 0) throw Error("rational with zero denominator");
    Rational r(static_cast<long>(num), static_cast<long>(den));
    r.canonicalize();
    return r;
}

// Parses "p", "p/q" or a decimal numeral like "-0.125" into an exact rational.
inline Rational rational_from_string(const std::string& text) {
    auto bad = [&] { throw Error("cannot parse rational: '" + text + "'"); };
    if (text.empty()) bad();
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        try {
            mpz_class num(text.substr(0, slash), 10);
            mpz_class den(text.substr(slash + 1), 10);
            if (den == 0) bad();
            Rational r(num, den);
            r.canonicalize();
            return r;
        } catch (const std::invalid_argument&) {
            bad();
        }
    }
    auto dot = text.find('.');
    try {
        if (dot == std::string::npos) {
            return Rational(mpz_class(text, 10));
        }
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        std::size_t places = text.size() - dot - 1;
        if (places == 0 || digits.empty()) bad();
        mpz_class num(digits, 10);
        mpz_class den(1);
        for (std::size_t i = 0; i < places; ++i) den *= 10;
        Rational r(num, den);
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        bad();
    }
    return Rational(0);  // unreachable
}

inline std::string to_string(const Rational& x) { return x.get_str(); }

// --- generic glue -----------------------------------------------------------

template <class R>
inline R scalar_from_int(long long n) {
    if constexpr (std::is_same_v<R, double>) {
        return static_cast<double>(n);
    } else {
        return Rational(static_cast<long>(n));
    }
}

template <class R>
inline bool scalar_is_zero(const R& x, double tol = 0.0) {
    if constexpr (std::is_same_v<R, double>) {
        return std::abs(x) <= tol;
    } else {
        return x == 0;
    }
}

template <class R>
inline R scalar_abs(const R& x) {
    if constexpr (std::is_same_v<R, double>) {
        return std::abs(x);
    } else {
        return x < 0 ? R(-x) : x;
    }
}

// e(x) := exp(2*pi*i*x).
inline std::complex<double> e_of(double x) {
    const double t = 2.0 * std::numbers::pi * x;
    return {std::cos(t), std::sin(t)};
}

// Named constants accepted in float-mode binding files.  Exact mode rejects
// all of them (they are irrational).
inline bool named_constant(const std::string& name, double& out) {
    if (name == "sqrt2") { out = std::numbers::sqrt2; return true; }
    if (name == "sqrt3") { out = std::numbers::sqrt3; return true; }
    if (name == "sqrt5") { out = 2.23606797749978969640917366873; return true; }
    if (name == "pi")    { out = std::numbers::pi; return true; }
    if (name == "phi")   { out = std::numbers::phi; return true; }
    return false;
}

}  // namespace bracketlab
