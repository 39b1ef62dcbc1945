// Finite sequences and discrete difference operators.
//
// RealSeq<R> is a function on an integer interval [lo, hi].  Differences on an
// interval shrink the domain to {n : n and n+h both in the domain} instead of
// padding; callers intersect domains.  ComplexSeq is a complex-valued function
// either on an interval or on the cyclic group Z/NZ, where the multiplicative
// difference wraps.

#pragma once

#include <complex>
#include <span>
#include <vector>

#include "bracketlab/bracket.hpp"
#include "bracketlab/interval.hpp"

namespace bracketlab {

template <class R>
struct RealSeq {
    long long lo = 1;
    std::vector<R> values;

    RealSeq() = default;
    RealSeq(long long lo_, std::vector<R> v) : lo(lo_), values(std::move(v)) {}

    long long hi() const { return lo + static_cast<long long>(values.size()) - 1; }
    bool empty() const { return values.empty(); }
    long long size() const { return static_cast<long long>(values.size()); }

    const R& at(long long n) const { return values[static_cast<std::size_t>(n - lo)]; }
    R& at(long long n) { return values[static_cast<std::size_t>(n - lo)]; }

    template <class F>
    static RealSeq tabulate(long long lo_, long long hi_, F f) {
        RealSeq s;
        s.lo = lo_;
        if (hi_ >= lo_) {
            s.values.reserve(static_cast<std::size_t>(hi_ - lo_ + 1));
            for (long long n = lo_; n <= hi_; ++n) s.values.push_back(f(n));
        }
        return s;
    }
};

template <class R>
RealSeq<R> seq_from_poly(const BracketPoly<R>& p, long long N) {
    return RealSeq<R>::tabulate(1, N, [&](long long n) { return eval(p, n); });
}

// Delta_h phi(n) := phi(n+h) - phi(n) on the narrowed domain.
template <class R>
RealSeq<R> delta(const RealSeq<R>& phi, long long h) {
    long long lo = std::max(phi.lo, phi.lo - h);
    long long hi = std::min(phi.hi(), phi.hi() - h);
    return RealSeq<R>::tabulate(lo, hi, [&](long long n) { return R(phi.at(n + h) - phi.at(n)); });
}

// Delta_{h1,...,hm} as a left fold; mixed differences commute, so the result
// does not depend on the order of hs.
template <class R>
RealSeq<R> delta_iter(RealSeq<R> phi, std::span<const long long> hs) {
    for (long long h : hs) phi = delta(phi, h);
    return phi;
}

struct ComplexSeq {
    enum class Domain { Interval, Cyclic };

    Domain domain = Domain::Interval;
    long long lo = 1;  // Interval only
    std::vector<std::complex<double>> values;
    bool disc_valued = false;

    long long size() const { return static_cast<long long>(values.size()); }
    long long hi() const { return lo + size() - 1; }

    static ComplexSeq cyclic(std::vector<std::complex<double>> v, bool disc = false) {
        ComplexSeq s;
        s.domain = Domain::Cyclic;
        s.lo = 0;
        s.values = std::move(v);
        s.disc_valued = disc;
        if (disc) s.check_disc();
        return s;
    }

    static ComplexSeq interval(long long lo, std::vector<std::complex<double>> v,
                               bool disc = false) {
        ComplexSeq s;
        s.domain = Domain::Interval;
        s.lo = lo;
        s.values = std::move(v);
        s.disc_valued = disc;
        if (disc) s.check_disc();
        return s;
    }

    void check_disc() const {
        for (const auto& z : values)
            if (std::abs(z) > 1.0 + 1e-12) throw Error("sequence is not disc-valued");
    }

    const std::complex<double>& at_cyclic(long long x) const {
        long long m = size();
        long long r = x % m;
        if (r < 0) r += m;
        return values[static_cast<std::size_t>(r)];
    }
};

// e(phi) on [1, N] for a real sequence phi.
template <class R>
ComplexSeq phase_seq(const RealSeq<R>& phi) {
    std::vector<std::complex<double>> v;
    v.reserve(static_cast<std::size_t>(phi.size()));
    for (const auto& x : phi.values) v.push_back(e_of(to_double(x)));
    return ComplexSeq::interval(phi.lo, std::move(v), /*disc=*/true);
}

// Delta*_h f(x) := f(x+h) * conj(f(x)); wraps on a cyclic domain, shrinks an
// interval domain like delta().
inline ComplexSeq mult_delta(const ComplexSeq& f, long long h) {
    if (f.domain == ComplexSeq::Domain::Cyclic) {
        const long long m = f.size();
        std::vector<std::complex<double>> v(static_cast<std::size_t>(m));
        for (long long x = 0; x < m; ++x)
            v[static_cast<std::size_t>(x)] = f.at_cyclic(x + h) * std::conj(f.values[static_cast<std::size_t>(x)]);
        ComplexSeq out = ComplexSeq::cyclic(std::move(v));
        out.disc_valued = f.disc_valued;
        return out;
    }
    long long lo = std::max(f.lo, f.lo - h);
    long long hi = std::min(f.hi(), f.hi() - h);
    std::vector<std::complex<double>> v;
    for (long long n = lo; n <= hi; ++n) {
        v.push_back(f.values[static_cast<std::size_t>(n + h - f.lo)] *
                    std::conj(f.values[static_cast<std::size_t>(n - f.lo)]));
    }
    ComplexSeq out = ComplexSeq::interval(lo, std::move(v));
    out.disc_valued = f.disc_valued;
    return out;
}

// Oracle for the fractional-part difference identity: when {x} and {y} both
// lie in an interval J of width < 1/2, {x} - {y} must equal {x - y}.  Returns
// whether the implication holds (vacuously true when the premise fails).
template <class R>
bool frac_difference_check(const R& x, const R& y, const IntervalSpec& J) {
    if (!(J.width() < Rational(1, 2))) throw Error("frac_difference_check needs width(J) < 1/2");
    R fx = frac(x), fy = frac(y);
    if (!J.contains(fx) || !J.contains(fy)) return true;
    R lhs = R(fx - fy);
    R rhs = frac(R(x - y));
    if constexpr (std::is_same_v<R, double>) {
        return std::abs(lhs - rhs) <= 1e-12;
    } else {
        return lhs == rhs;
    }
}

}  // namespace bracketlab
