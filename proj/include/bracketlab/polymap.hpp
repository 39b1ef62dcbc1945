// Polynomial mappings n -> T_p^r and their difference calculus.
//
// A mapping stores one polynomial in n per strictly-upper entry.  Products
// and the closed-form inverse
//
//     (rho^{-1})_{ij} = -rho_{ij} - sum_{i<t<j} rho_{it} (rho^{-1})_{tj}
//
// are symbolic, so rho(n) rho^{-1}(n) = 1 holds as a polynomial identity.
// The difference d_h rho(n) = rho(n+h) rho(n)^{-1} with a concrete integer h
// stays a polynomial mapping.
//
// Triviality depth (the smallest d with every (d+1)-fold difference equal to
// the constant identity) is computed by the layer schedule: while a mapping
// takes values in T(l-1), the group operation restricted to distance-l
// entries is plain addition, so those entries evolve as ordinary finite
// differences in n and a degree-d layer dies after exactly d+1 steps for any
// nonzero h.  The schedule applies that many differences with pseudorandom
// nonzero step sizes, verifies the layer vanished, and recurses into the
// next layer; deeper degrees are measured on the actual intermediate mapping
// rather than bounded a priori.  Different h draws can only lower deeper
// degrees on a measure-zero set, which the stability tests cross-check with
// independent seeds.

#pragma once

#include <random>

#include "bracketlab/nilpotent.hpp"

namespace bracketlab {

template <class R>
struct Poly1 {
    std::vector<R> c;  // c[i] * n^i, trailing zeros trimmed

    Poly1() = default;
    explicit Poly1(std::vector<R> coeffs) : c(std::move(coeffs)) { trim(); }

    void trim() {
        while (!c.empty() && scalar_is_zero(c.back())) c.pop_back();
    }

    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }  // -1 when zero

    R eval(long long n) const {
        R x = scalar_from_int<R>(n);
        R acc = scalar_from_int<R>(0);
        for (std::size_t i = c.size(); i-- > 0;) acc = R(acc * x + c[i]);
        return acc;
    }

    friend Poly1 operator+(const Poly1& a, const Poly1& b) {
        Poly1 out;
        out.c.resize(std::max(a.c.size(), b.c.size()), scalar_from_int<R>(0));
        for (std::size_t i = 0; i < a.c.size(); ++i) out.c[i] = R(out.c[i] + a.c[i]);
        for (std::size_t i = 0; i < b.c.size(); ++i) out.c[i] = R(out.c[i] + b.c[i]);
        out.trim();
        return out;
    }

    friend Poly1 operator-(const Poly1& a, const Poly1& b) {
        Poly1 out;
        out.c.resize(std::max(a.c.size(), b.c.size()), scalar_from_int<R>(0));
        for (std::size_t i = 0; i < a.c.size(); ++i) out.c[i] = R(out.c[i] + a.c[i]);
        for (std::size_t i = 0; i < b.c.size(); ++i) out.c[i] = R(out.c[i] - b.c[i]);
        out.trim();
        return out;
    }

    friend Poly1 operator*(const Poly1& a, const Poly1& b) {
        if (a.is_zero() || b.is_zero()) return Poly1();
        Poly1 out;
        out.c.assign(a.c.size() + b.c.size() - 1, scalar_from_int<R>(0));
        for (std::size_t i = 0; i < a.c.size(); ++i)
            for (std::size_t j = 0; j < b.c.size(); ++j)
                out.c[i + j] = R(out.c[i + j] + a.c[i] * b.c[j]);
        out.trim();
        return out;
    }

    Poly1 negated() const {
        Poly1 out = *this;
        for (auto& v : out.c) v = R(-v);
        return out;
    }

    // p(n + h) for a concrete integer h, by Horner in (n + h).
    Poly1 shifted(long long h) const {
        if (is_zero() || h == 0) return *this;
        // synthetic evaluation: repeatedly fold in the shift
        Poly1 out = *this;
        R hh = scalar_from_int<R>(h);
        // Taylor shift via repeated synthetic division by (n - (-h))
        std::vector<R> a = out.c;
        std::vector<R> res(a.size(), scalar_from_int<R>(0));
        for (std::size_t k = 0; k < a.size(); ++k) {
            for (std::size_t i = a.size() - 1; i > k; --i)
                a[i - 1] = R(a[i - 1] + hh * a[i]);
            res[k] = a[k];
        }
        return Poly1(std::move(res));
    }

    bool constant_term_zero() const { return c.empty() || scalar_is_zero(c.front()); }

    friend bool operator==(const Poly1& a, const Poly1& b) { return a.c == b.c; }
};

template <class R>
struct PolynomialMapping {
    int p = 1, r = 1;
    std::vector<Poly1<R>> entries;  // indexed entry_index(l, i, j) for i < j

    PolynomialMapping() = default;
    PolynomialMapping(int p_, int r_) : p(p_), r(r_) {
        entries.resize(static_cast<std::size_t>(r_) * (p_ + 1) * (p_ + 1));
    }

    int dim() const { return p + 1; }

    std::size_t entry_index(int l, int i, int j) const {
        return static_cast<std::size_t>((l * dim() + i) * dim() + j);
    }

    Poly1<R>& at(int l, int i, int j) { return entries[entry_index(l, i, j)]; }
    const Poly1<R>& at(int l, int i, int j) const { return entries[entry_index(l, i, j)]; }

    Unitriangular<R> eval(long long n) const {
        Unitriangular<R> g(p, r);
        for (int l = 0; l < r; ++l)
            for (int i = 0; i <= p; ++i)
                for (int j = i + 1; j <= p; ++j)
                    g.mats[static_cast<std::size_t>(l)].at(i, j) = at(l, i, j).eval(n);
        return g;
    }

    int degree() const {
        int d = -1;
        for (const auto& e : entries) d = std::max(d, e.degree());
        return d;
    }

    int degree_at_distance(int dist) const {
        int d = -1;
        for (int l = 0; l < r; ++l)
            for (int i = 0; i + dist <= p; ++i) d = std::max(d, at(l, i, i + dist).degree());
        return d;
    }

    bool constant_free() const {
        for (const auto& e : entries)
            if (!e.constant_term_zero()) return false;
        return true;
    }

    bool is_identity() const {
        for (const auto& e : entries)
            if (!e.is_zero()) return false;
        return true;
    }

    // Smallest distance with a nonzero entry; p+1 for the identity mapping.
    int min_distance() const {
        for (int d = 1; d <= p; ++d)
            if (degree_at_distance(d) >= 0) return d;
        return p + 1;
    }

    friend bool operator==(const PolynomialMapping& a, const PolynomialMapping& b) {
        return a.p == b.p && a.r == b.r && a.entries == b.entries;
    }
};

template <class R>
PolynomialMapping<R> poly_map_product(const PolynomialMapping<R>& a,
                                      const PolynomialMapping<R>& b) {
    if (a.p != b.p || a.r != b.r) throw Error("mapping shape mismatch");
    PolynomialMapping<R> out(a.p, a.r);
    for (int l = 0; l < a.r; ++l)
        for (int i = 0; i <= a.p; ++i)
            for (int j = i + 1; j <= a.p; ++j) {
                Poly1<R> acc = a.at(l, i, j) + b.at(l, i, j);
                for (int t = i + 1; t < j; ++t) acc = acc + a.at(l, i, t) * b.at(l, t, j);
                out.at(l, i, j) = acc;
            }
    return out;
}

// Closed-form symbolic inverse by back-substitution on j - i.
template <class R>
PolynomialMapping<R> poly_map_inverse(const PolynomialMapping<R>& rho) {
    PolynomialMapping<R> inv(rho.p, rho.r);
    for (int dist = 1; dist <= rho.p; ++dist)
        for (int l = 0; l < rho.r; ++l)
            for (int i = 0; i + dist <= rho.p; ++i) {
                int j = i + dist;
                Poly1<R> acc = rho.at(l, i, j).negated();
                for (int t = i + 1; t < j; ++t)
                    acc = acc - rho.at(l, i, t) * inv.at(l, t, j);
                inv.at(l, i, j) = acc;
            }
    return inv;
}

template <class R>
PolynomialMapping<R> poly_map_shift(const PolynomialMapping<R>& rho, long long h) {
    PolynomialMapping<R> out(rho.p, rho.r);
    for (std::size_t i = 0; i < rho.entries.size(); ++i) out.entries[i] = rho.entries[i].shifted(h);
    return out;
}

// d_h rho (n) = rho(n + h) rho(n)^{-1}.
template <class R>
PolynomialMapping<R> poly_map_derivative(const PolynomialMapping<R>& rho, long long h) {
    return poly_map_product(poly_map_shift(rho, h), poly_map_inverse(rho));
}

// A priori depth bound from the degree recursion: entries at distance l of
// any iterated difference keep degree <= l*k, so the layer schedule needs at
// most sum_l (l*k + 1) steps in total.
inline int depth_bound(int p, int k) {
    int steps = 0;
    for (int l = 1; l <= p; ++l) steps += l * std::max(k, 0) + 1;
    return std::max(steps - 1, 0);
}

struct DepthSchedule {
    std::vector<int> layer_death;  // layer_death[l-1]: differences after which
                                   // distance-l entries vanish for every h
    int total_steps = 0;           // steps to reach the constant identity
};

template <class R>
DepthSchedule death_schedule(const PolynomialMapping<R>& rho, std::uint64_t seed = 12345) {
    DepthSchedule sched;
    sched.layer_death.assign(static_cast<std::size_t>(rho.p), 0);
    PolynomialMapping<R> cur = rho;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long long> dh(1, 37);
    int steps = 0;
    const int cap = 2 * depth_bound(rho.p, std::max(rho.degree(), 0)) + 8;
    for (int l = 1; l <= rho.p; ++l) {
        int d = cur.degree_at_distance(l);
        if (d < 0) {
            sched.layer_death[static_cast<std::size_t>(l - 1)] = steps;
            continue;
        }
        for (int s = 0; s <= d; ++s) {
            cur = poly_map_derivative(cur, dh(rng));
            ++steps;
            if (steps > cap) throw Error("derivative iteration cap exceeded");
        }
        if (cur.degree_at_distance(l) >= 0)
            throw Error("layer failed to vanish on schedule");
        sched.layer_death[static_cast<std::size_t>(l - 1)] = steps;
    }
    if (!cur.is_identity()) throw Error("mapping not trivial after full schedule");
    sched.total_steps = steps;
    return sched;
}

// Smallest d such that every (d+1)-fold difference is the constant identity.
template <class R>
int triviality_depth(const PolynomialMapping<R>& rho, std::uint64_t seed = 12345) {
    if (rho.is_identity()) return 0;
    auto sched = death_schedule(rho, seed);
    return std::max(sched.total_steps - 1, 0);
}

// d_{h_i} ... d_{h_1} rho must take values in G_i for every i: equivalent to
// each layer dying no later than the filtration demands.
template <class R>
bool is_poly_sequence(const PolynomialMapping<R>& rho, const Filtration& F,
                      std::uint64_t seed = 12345) {
    if (rho.p != F.p || rho.r != F.r) throw Error("mapping and filtration shapes differ");
    auto sched = death_schedule(rho, seed);
    for (int i = 1; i <= F.degree + 1; ++i) {
        int l = F.min_dist[static_cast<std::size_t>(i)];
        for (int layer = 1; layer <= l; ++layer)
            if (sched.layer_death[static_cast<std::size_t>(layer - 1)] > i) return false;
    }
    return true;
}

// A filtration making every degree-k mapping into T_p^r a polynomial
// sequence: dilate the lower central series by the triviality depth of a
// generic (dense random-coefficient) degree-k mapping.
inline Filtration finer_filtration(int p, int r, int k, std::uint64_t seed = 2024) {
    if (k <= 0) return Filtration::lower_central(p, r).refine(1);
    PolynomialMapping<Rational> generic(p, r);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> dc(1, 19);
    for (int l = 0; l < r; ++l)
        for (int i = 0; i <= p; ++i)
            for (int j = i + 1; j <= p; ++j) {
                std::vector<Rational> coeffs;
                coeffs.reserve(static_cast<std::size_t>(k) + 1);
                for (int t = 0; t <= k; ++t) coeffs.emplace_back(dc(rng));
                generic.at(l, i, j) = Poly1<Rational>(std::move(coeffs));
            }
    int d = triviality_depth(generic, seed ^ 0xabcdef);
    return Filtration::lower_central(p, r).refine(std::max(d, 1));
}

}  // namespace bracketlab
