// Subintervals of (-1/2, 1/2] with exact rational endpoints and explicit
// open/closed flags.  IntervalSpec::centered(eps) is the open interval
// (-eps, eps), written I_eps elsewhere in the library.

#pragma once

#include <string>

#include "bracketlab/scalar.hpp"

namespace bracketlab {

struct IntervalSpec {
    Rational lo{-1, 2};
    Rational hi{1, 2};
    bool lo_closed = false;
    bool hi_closed = true;

    IntervalSpec() = default;

    IntervalSpec(Rational lo_, Rational hi_, bool lo_closed_, bool hi_closed_)
        : lo(std::move(lo_)), hi(std::move(hi_)),
          lo_closed(lo_closed_), hi_closed(hi_closed_) {
        if (hi < lo) throw Error("interval with negative width");
        if (lo < Rational(-1, 2) || hi > Rational(1, 2) ||
            (lo == Rational(-1, 2) && lo_closed)) {
            throw Error("interval must lie inside (-1/2, 1/2]");
        }
    }

    // I_eps = (-eps, eps), open on both sides.
    static IntervalSpec centered(const Rational& eps) {
        return IntervalSpec(-eps, eps, false, false);
    }

    // The full fundamental interval (-1/2, 1/2].
    static IntervalSpec full() { return IntervalSpec(); }

    Rational width() const { return hi - lo; }

    bool contains(const Rational& x) const {
        if (x < lo || (x == lo && !lo_closed)) return false;
        if (x > hi || (x == hi && !hi_closed)) return false;
        return true;
    }

    // Float-mode membership uses exact IEEE comparisons against the rounded
    // endpoints; boundary values are measure zero and accepted as such.
    bool contains(double x) const {
        const double l = to_double(lo), h = to_double(hi);
        if (x < l || (x == l && !lo_closed)) return false;
        if (x > h || (x == h && !hi_closed)) return false;
        return true;
    }

    // True when this interval sits inside [-w, w] style centered windows,
    // used for the J_i subset-of-I_{1/2-eps} preconditions.
    bool inside(const IntervalSpec& outer) const {
        bool lo_ok = lo > outer.lo || (lo == outer.lo && (outer.lo_closed || !lo_closed));
        bool hi_ok = hi < outer.hi || (hi == outer.hi && (outer.hi_closed || !hi_closed));
        return lo_ok && hi_ok;
    }

    std::string describe() const {
        std::string s = lo_closed ? "[" : "(";
        s += to_string(lo) + ", " + to_string(hi);
        s += hi_closed ? "]" : ")";
        return s;
    }
};

}  // namespace bracketlab
