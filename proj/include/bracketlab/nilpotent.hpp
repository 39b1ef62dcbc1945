// Unitriangular groups T_p^r, their Lie algebras, Mal'cev bases and the two
// coordinate maps.
//
// T_p is the group of (p+1)x(p+1) upper-triangular matrices with unit
// diagonal; T_p^r is the direct product of r copies, and Z_p^r the lattice of
// integer matrices.  A Mal'cev basis is an ordered list of signed elementary
// generators; psi(g) solves g = exp(t_1 X_1) ... exp(t_m X_m) by peeling one
// coordinate at a time (each X_i is +-E_ab with E_ab^2 = 0, so the residual's
// (a, b) entry reads off t_i directly).  chi(g) is psi of the unique
// Gamma-translate gz whose coordinates all lie in (-1/2, 1/2]; the reduction
// sweeps i ascending, right-multiplying by exp(-[t_i] X_i), which relies on
// the tail spans being ideals (the nested property).
//
// The standard basis lists the signed generators by (distance from the
// diagonal, copy, row); the classical Heisenberg basis swaps the two
// distance-1 generators, which changes the third coordinate from z - xy to z.

#pragma once

#include <vector>

#include "bracketlab/scalar.hpp"

namespace bracketlab {

template <class R>
struct SquareMat {
    int n = 0;
    std::vector<R> a;

    SquareMat() = default;
    explicit SquareMat(int n_) : n(n_), a(static_cast<std::size_t>(n_) * n_, scalar_from_int<R>(0)) {}

    static SquareMat identity(int n_) {
        SquareMat m(n_);
        for (int i = 0; i < n_; ++i) m.at(i, i) = scalar_from_int<R>(1);
        return m;
    }

    R& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    const R& at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

    friend SquareMat operator*(const SquareMat& x, const SquareMat& y) {
        SquareMat out(x.n);
        for (int i = 0; i < x.n; ++i)
            for (int t = 0; t < x.n; ++t) {
                if (scalar_is_zero(x.at(i, t))) continue;
                for (int j = 0; j < x.n; ++j)
                    out.at(i, j) = R(out.at(i, j) + x.at(i, t) * y.at(t, j));
            }
        return out;
    }

    friend SquareMat operator+(const SquareMat& x, const SquareMat& y) {
        SquareMat out(x.n);
        for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] = R(x.a[i] + y.a[i]);
        return out;
    }

    friend SquareMat operator-(const SquareMat& x, const SquareMat& y) {
        SquareMat out(x.n);
        for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] = R(x.a[i] - y.a[i]);
        return out;
    }

    SquareMat scaled(const R& c) const {
        SquareMat out(n);
        for (std::size_t i = 0; i < a.size(); ++i) out.a[i] = R(a[i] * c);
        return out;
    }

    bool is_zero(double tol = 0.0) const {
        for (const auto& v : a)
            if (!scalar_is_zero(v, tol)) return false;
        return true;
    }
};

// An element of T_p^r: r unit-upper-triangular matrices of size (p+1)x(p+1).
template <class R>
struct Unitriangular {
    int p = 1, r = 1;
    std::vector<SquareMat<R>> mats;

    Unitriangular() = default;
    Unitriangular(int p_, int r_) : p(p_), r(r_) {
        mats.assign(static_cast<std::size_t>(r_), SquareMat<R>::identity(p_ + 1));
    }

    int dim() const { return p + 1; }

    friend Unitriangular operator*(const Unitriangular& x, const Unitriangular& y) {
        if (x.p != y.p || x.r != y.r) throw Error("group element shape mismatch");
        Unitriangular out(x.p, x.r);
        for (int l = 0; l < x.r; ++l)
            out.mats[static_cast<std::size_t>(l)] =
                x.mats[static_cast<std::size_t>(l)] * y.mats[static_cast<std::size_t>(l)];
        return out;
    }

    Unitriangular inverse() const {
        // (I + U)^{-1} = I - U + U^2 - ... with U strictly upper, U^{p+1} = 0.
        Unitriangular out(p, r);
        for (int l = 0; l < r; ++l) {
            SquareMat<R> u = mats[static_cast<std::size_t>(l)] - SquareMat<R>::identity(dim());
            SquareMat<R> acc = SquareMat<R>::identity(dim());
            SquareMat<R> power = SquareMat<R>::identity(dim());
            int sign = -1;
            for (int i = 1; i <= p; ++i) {
                power = power * u;
                acc = sign > 0 ? acc + power : acc - power;
                sign = -sign;
            }
            out.mats[static_cast<std::size_t>(l)] = acc;
        }
        return out;
    }

    bool is_identity(double tol = 0.0) const {
        for (int l = 0; l < r; ++l)
            for (int i = 0; i < dim(); ++i)
                for (int j = i + 1; j < dim(); ++j)
                    if (!scalar_is_zero(mats[static_cast<std::size_t>(l)].at(i, j), tol)) return false;
        return true;
    }

    // Smallest off-diagonal distance with a nonzero entry; p+1 for identity.
    int min_distance(double tol = 0.0) const {
        for (int d = 1; d <= p; ++d)
            for (int l = 0; l < r; ++l)
                for (int i = 0; i + d < dim(); ++i)
                    if (!scalar_is_zero(mats[static_cast<std::size_t>(l)].at(i, i + d), tol)) return d;
        return p + 1;
    }
};

template <class R>
struct LieElement {
    int p = 1, r = 1;
    std::vector<SquareMat<R>> mats;  // strictly upper triangular

    LieElement() = default;
    LieElement(int p_, int r_) : p(p_), r(r_) {
        mats.assign(static_cast<std::size_t>(r_), SquareMat<R>(p_ + 1));
    }

    int dim() const { return p + 1; }

    friend LieElement operator+(const LieElement& x, const LieElement& y) {
        LieElement out(x.p, x.r);
        for (int l = 0; l < x.r; ++l)
            out.mats[static_cast<std::size_t>(l)] =
                x.mats[static_cast<std::size_t>(l)] + y.mats[static_cast<std::size_t>(l)];
        return out;
    }

    LieElement scaled(const R& c) const {
        LieElement out(p, r);
        for (int l = 0; l < r; ++l)
            out.mats[static_cast<std::size_t>(l)] = mats[static_cast<std::size_t>(l)].scaled(c);
        return out;
    }

    friend LieElement bracket(const LieElement& x, const LieElement& y) {
        LieElement out(x.p, x.r);
        for (int l = 0; l < x.r; ++l) {
            const auto& a = x.mats[static_cast<std::size_t>(l)];
            const auto& b = y.mats[static_cast<std::size_t>(l)];
            out.mats[static_cast<std::size_t>(l)] = a * b - b * a;
        }
        return out;
    }
};

// exp via the terminating nilpotent series sum X^i / i!.
template <class R>
Unitriangular<R> mat_exp(const LieElement<R>& X) {
    Unitriangular<R> out(X.p, X.r);
    for (int l = 0; l < X.r; ++l) {
        SquareMat<R> acc = SquareMat<R>::identity(X.dim());
        SquareMat<R> power = SquareMat<R>::identity(X.dim());
        R fact = scalar_from_int<R>(1);
        for (int i = 1; i <= X.p; ++i) {
            power = power * X.mats[static_cast<std::size_t>(l)];
            fact = R(fact * scalar_from_int<R>(i));
            acc = acc + power.scaled(R(scalar_from_int<R>(1) / fact));
        }
        out.mats[static_cast<std::size_t>(l)] = acc;
    }
    return out;
}

// log via sum (-1)^{i+1} (g - I)^i / i.
template <class R>
LieElement<R> mat_log(const Unitriangular<R>& g) {
    LieElement<R> out(g.p, g.r);
    for (int l = 0; l < g.r; ++l) {
        SquareMat<R> u = g.mats[static_cast<std::size_t>(l)] - SquareMat<R>::identity(g.dim());
        SquareMat<R> acc(g.dim());
        SquareMat<R> power = SquareMat<R>::identity(g.dim());
        int sign = +1;
        for (int i = 1; i <= g.p; ++i) {
            power = power * u;
            R coeff = R(scalar_from_int<R>(sign) / scalar_from_int<R>(i));
            acc = acc + power.scaled(coeff);
            sign = -sign;
        }
        out.mats[static_cast<std::size_t>(l)] = acc;
    }
    return out;
}

// --- Mal'cev bases -------------------------------------------------------------

// One signed elementary generator: entry (row, col) of copy l, 0-indexed.
struct GeneratorId {
    int copy = 0;
    int row = 0;
    int col = 1;
    int distance() const { return col - row; }
    friend bool operator==(const GeneratorId& a, const GeneratorId& b) {
        return a.copy == b.copy && a.row == b.row && a.col == b.col;
    }
};

struct MalcevBasis {
    int p = 1, r = 1;
    std::vector<std::pair<GeneratorId, int>> elements;  // (generator, sign)

    int dim() const { return static_cast<int>(elements.size()); }

    // Distance classes ascending, copies ascending within a class, rows
    // ascending within a copy.
    static MalcevBasis standard(int p, int r = 1) {
        MalcevBasis b;
        b.p = p;
        b.r = r;
        for (int d = 1; d <= p; ++d)
            for (int l = 0; l < r; ++l)
                for (int row = 0; row + d <= p; ++row)
                    b.elements.push_back({GeneratorId{l, row, row + d}, +1});
        return b;
    }

    // The classical Heisenberg ordering: distance-1 generators swapped, so
    // psi reads (y, x, z) off [[1,x,z],[0,1,y],[0,0,1]].
    static MalcevBasis heisenberg_classical() {
        MalcevBasis b;
        b.p = 2;
        b.r = 1;
        b.elements.push_back({GeneratorId{0, 1, 2}, +1});
        b.elements.push_back({GeneratorId{0, 0, 1}, +1});
        b.elements.push_back({GeneratorId{0, 0, 2}, +1});
        return b;
    }

    int index_of(const GeneratorId& id) const {
        for (std::size_t i = 0; i < elements.size(); ++i)
            if (elements[i].first == id) return static_cast<int>(i);
        return -1;
    }

    template <class R>
    LieElement<R> lie_generator(int i) const {
        const auto& [id, sign] = elements[static_cast<std::size_t>(i)];
        LieElement<R> X(p, r);
        X.mats[static_cast<std::size_t>(id.copy)].at(id.row, id.col) = scalar_from_int<R>(sign);
        return X;
    }

    // Nesting certificate: every bracket [Y_s, Y_t] must decompose over basis
    // elements with index strictly greater than max(s, t).  Exact integer
    // arithmetic throughout.
    bool check_nested() const {
        const int m = dim();
        for (int s = 0; s < m; ++s) {
            for (int t = 0; t < m; ++t) {
                LieElement<Rational> br =
                    bracket(lie_generator<Rational>(s), lie_generator<Rational>(t));
                // decompose and verify support
                for (int l = 0; l < r; ++l) {
                    for (int i = 0; i <= p; ++i) {
                        for (int j = i + 1; j <= p; ++j) {
                            const Rational& v = br.mats[static_cast<std::size_t>(l)].at(i, j);
                            if (v == 0) continue;
                            int idx = index_of(GeneratorId{l, i, j});
                            if (idx < 0) return false;
                            if (idx <= std::max(s, t)) return false;
                        }
                    }
                }
            }
        }
        return true;
    }
};

struct NonBasisError : Error {
    using Error::Error;
};

// psi(g): peel coordinates in basis order.  exp(t s E_ab) = I + t s E_ab, so
// the residual's (a, b) entry is s * t_i once earlier factors are divided off.
template <class R>
std::vector<R> malcev_coords(const Unitriangular<R>& g, const MalcevBasis& B) {
    if (g.p != B.p || g.r != B.r) throw Error("element and basis shapes differ");
    Unitriangular<R> residual = g;
    std::vector<R> t;
    t.reserve(B.elements.size());
    for (const auto& [id, sign] : B.elements) {
        R ti = R(residual.mats[static_cast<std::size_t>(id.copy)].at(id.row, id.col) *
                 scalar_from_int<R>(sign));
        t.push_back(ti);
        // left-divide by exp(t_i X_i): multiply by I - t_i s E_ab on the left
        Unitriangular<R> inv_factor(g.p, g.r);
        inv_factor.mats[static_cast<std::size_t>(id.copy)].at(id.row, id.col) =
            R(-(ti * scalar_from_int<R>(sign)));
        residual = inv_factor * residual;
    }
    double tol = std::is_same_v<R, double> ? 1e-9 : 0.0;
    if (!residual.is_identity(tol))
        throw NonBasisError("nonzero residual after peeling; not a Mal'cev basis for this element");
    return t;
}

template <class R>
Unitriangular<R> from_coords(const std::vector<R>& t, const MalcevBasis& B) {
    if (static_cast<int>(t.size()) != B.dim()) throw Error("coordinate length mismatch");
    Unitriangular<R> g(B.p, B.r);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto& [id, sign] = B.elements[i];
        Unitriangular<R> factor(B.p, B.r);
        factor.mats[static_cast<std::size_t>(id.copy)].at(id.row, id.col) =
            R(t[i] * scalar_from_int<R>(sign));
        g = g * factor;
    }
    return g;
}

template <class R>
struct FundamentalReduction {
    std::vector<R> chi;     // coordinates of g z, all in (-1/2, 1/2]
    Unitriangular<R> z;     // the lattice translate applied on the right
};

// chi(g) = psi(g z) for the unique z in Gamma landing in the fundamental box.
// One ascending sweep suffices because each h_i is an ideal; a float run that
// grazes the boundary is swept a second time.
template <class R>
FundamentalReduction<R> reduce_to_fundamental(const Unitriangular<R>& g, const MalcevBasis& B) {
    FundamentalReduction<R> out;
    out.z = Unitriangular<R>(g.p, g.r);
    Unitriangular<R> cur = g;
    const int m = B.dim();
    for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i < m; ++i) {
            std::vector<R> t = malcev_coords(cur, B);
            R shift = int_part(t[static_cast<std::size_t>(i)]);
            if (scalar_is_zero(shift)) continue;
            const auto& [id, sign] = B.elements[static_cast<std::size_t>(i)];
            Unitriangular<R> factor(g.p, g.r);
            factor.mats[static_cast<std::size_t>(id.copy)].at(id.row, id.col) =
                R(-(shift * scalar_from_int<R>(sign)));
            cur = cur * factor;
            out.z = out.z * factor;
        }
        out.chi = malcev_coords(cur, B);
        bool in_box = true;
        for (const auto& c : out.chi) {
            R f = frac(c);
            if constexpr (std::is_same_v<R, double>) {
                if (std::abs(f - c) > 0.5) in_box = false;  // off by a full unit
            } else {
                if (f != c) in_box = false;
            }
        }
        if (in_box) break;
    }
    return out;
}

// The block embedding of T_p into T_q (q a multiple of p): entry (i, j) of
// the small matrix lands at (i*s, j*s) with stride s = q/p.  A group
// homomorphism, and integer matrices map to integer matrices.
template <class R>
Unitriangular<R> embed(int p, int q, const Unitriangular<R>& g) {
    if (g.r != 1) throw Error("embed expects a single-copy element");
    if (g.p != p) throw Error("element is not in T_p");
    if (q % p != 0) throw Error("q must be a multiple of p");
    const int s = q / p;
    Unitriangular<R> out(q, 1);
    for (int i = 0; i <= p; ++i)
        for (int j = i + 1; j <= p; ++j)
            out.mats[0].at(i * s, j * s) = g.mats[0].at(i, j);
    return out;
}

// --- the Heisenberg orbit golden check -------------------------------------------

template <class R>
struct OrbitCheckReport {
    bool ok = true;
    long long first_bad_n = 0;
    double max_error = 0.0;
};

// g(n) = [[1, -alpha n, 0], [0, 1, beta n], [0, 0, 1]] reduces to the matrix
// [[1, {-alpha n}, {alpha n [beta n]}], [0, 1, {beta n}], [0, 0, 1]] in the
// entrywise fundamental domain (the classical-basis coordinates).
template <class R>
OrbitCheckReport<R> heisenberg_orbit_check(const R& alpha, const R& beta, long long n_max,
                                           double tol = 1e-9) {
    MalcevBasis B = MalcevBasis::heisenberg_classical();
    OrbitCheckReport<R> rep;
    for (long long n = 1; n <= n_max; ++n) {
        R an = R(alpha * scalar_from_int<R>(n));
        R bn = R(beta * scalar_from_int<R>(n));
        Unitriangular<R> g(2, 1);
        g.mats[0].at(0, 1) = R(-an);
        g.mats[0].at(1, 2) = bn;
        auto red = reduce_to_fundamental(g, B);
        const auto& M = red.z;  // cur = g * z
        Unitriangular<R> reduced = g * M;
        R want12 = frac(R(-an));
        R want23 = frac(bn);
        R want13 = frac(R(an * int_part(bn)));
        R d12 = R(reduced.mats[0].at(0, 1) - want12);
        R d23 = R(reduced.mats[0].at(1, 2) - want23);
        R d13 = R(reduced.mats[0].at(0, 2) - want13);
        double err = std::max({std::abs(to_double(d12)), std::abs(to_double(d23)),
                               std::abs(to_double(d13))});
        rep.max_error = std::max(rep.max_error, err);
        bool bad;
        if constexpr (std::is_same_v<R, double>) {
            bad = err > tol;
        } else {
            bad = !(d12 == 0 && d23 == 0 && d13 == 0);
        }
        if (bad) {
            rep.ok = false;
            rep.first_bad_n = n;
            return rep;
        }
    }
    return rep;
}

// --- filtrations -------------------------------------------------------------------

// A filtration of T_p^r whose terms are the layer subgroups T_p^r(l) =
// {entries within distance l of the diagonal vanish}; min_dist[i] records the
// l for G_i.  The lower central series has G_i = T(i-1); refine(d) produces
// the dilated filtration G_i = G'_{ceil(i/d)} of degree p*d.
struct Filtration {
    int p = 1, r = 1;
    int degree = 1;
    std::vector<int> min_dist;  // indices 0 .. degree+1

    static Filtration lower_central(int p, int r = 1) {
        Filtration f;
        f.p = p;
        f.r = r;
        f.degree = p;
        f.min_dist.resize(static_cast<std::size_t>(p) + 2);
        f.min_dist[0] = 0;
        for (int i = 1; i <= p + 1; ++i) f.min_dist[static_cast<std::size_t>(i)] = i - 1;
        return f;
    }

    Filtration refine(int d) const {
        if (d < 1) throw Error("refinement factor must be >= 1");
        Filtration f;
        f.p = p;
        f.r = r;
        f.degree = degree * d;
        f.min_dist.resize(static_cast<std::size_t>(f.degree) + 2);
        f.min_dist[0] = min_dist[0];
        for (int i = 1; i <= f.degree + 1; ++i) {
            int src = (i + d - 1) / d;  // ceil(i/d)
            f.min_dist[static_cast<std::size_t>(i)] =
                min_dist[static_cast<std::size_t>(std::min(src, degree + 1))];
        }
        return f;
    }

    template <class R>
    bool contains(const Unitriangular<R>& g, int i, double tol = 0.0) const {
        int l = min_dist[static_cast<std::size_t>(std::min<long long>(i, degree + 1))];
        for (int c = 0; c < g.r; ++c)
            for (int a = 0; a < g.dim(); ++a)
                for (int b = a + 1; b <= std::min(a + l, g.dim() - 1); ++b)
                    if (!scalar_is_zero(g.mats[static_cast<std::size_t>(c)].at(a, b), tol))
                        return false;
        return true;
    }

    // Spot check [G_i, G_j] <= G_{i+j} on concrete elements.
    template <class R>
    bool commutator_ok(const Unitriangular<R>& gi, const Unitriangular<R>& gj, int i, int j,
                       double tol = 0.0) const {
        if (!contains(gi, i, tol) || !contains(gj, j, tol)) throw Error("inputs not in claimed layers");
        Unitriangular<R> comm = gi * gj * gi.inverse() * gj.inverse();
        return contains(comm, i + j, tol);
    }
};

}  // namespace bracketlab
