#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bracketlab/polymap.hpp"

using namespace bracketlab;

namespace {

Poly1<Rational> poly(std::initializer_list<long> coeffs) {
    std::vector<Rational> c;
    for (long v : coeffs) c.emplace_back(v);
    return Poly1<Rational>(std::move(c));
}

// [[1, a n, c n^2], [0, 1, b n], [0, 0, 1]]
PolynomialMapping<Rational> heis_map(long a, long b, long c) {
    PolynomialMapping<Rational> m(2, 1);
    m.at(0, 0, 1) = poly({0, a});
    m.at(0, 1, 2) = poly({0, b});
    m.at(0, 0, 2) = poly({0, 0, c});
    return m;
}

PolynomialMapping<Rational> random_mapping(std::mt19937_64& rng, int p, int degree) {
    PolynomialMapping<Rational> m(p, 1);
    std::uniform_int_distribution<long> dc(-6, 6);
    for (int i = 0; i <= p; ++i)
        for (int j = i + 1; j <= p; ++j) {
            std::vector<Rational> c;
            for (int t = 0; t <= degree; ++t) c.emplace_back(dc(rng));
            m.at(0, i, j) = Poly1<Rational>(std::move(c));
        }
    return m;
}

}  // namespace

TEST_CASE("evaluation of polynomial mappings") {
    auto m = heis_map(2, 3, 5);
    CHECK(m.constant_free());
    CHECK(m.eval(0).is_identity());

    auto g = m.eval(2);
    CHECK(g.mats[0].at(0, 1) == 4);
    CHECK(g.mats[0].at(1, 2) == 6);
    CHECK(g.mats[0].at(0, 2) == 20);

    // n = 1 returns coefficient sums
    PolynomialMapping<Rational> q(1, 1);
    q.at(0, 0, 1) = poly({3, -1, 4});
    CHECK(q.eval(1).mats[0].at(0, 1) == 6);

    PolynomialMapping<Rational> with_const(1, 1);
    with_const.at(0, 0, 1) = poly({1, 1});
    CHECK_FALSE(with_const.constant_free());
    CHECK_FALSE(with_const.eval(0).is_identity());
}

TEST_CASE("the closed-form inverse of the Heisenberg mapping") {
    auto m = heis_map(2, 3, 5);
    auto inv = poly_map_inverse(m);
    CHECK(inv.at(0, 0, 1) == poly({0, -2}));
    CHECK(inv.at(0, 1, 2) == poly({0, -3}));
    CHECK(inv.at(0, 0, 2) == poly({0, 0, 6 - 5}));  // ab n^2 - c n^2

    PolynomialMapping<Rational> id(3, 1);
    CHECK(poly_map_inverse(id).is_identity());
}

TEST_CASE("random mappings invert symbolically") {
    std::mt19937_64 rng(9);
    for (int rep = 0; rep < 20; ++rep) {
        auto m = random_mapping(rng, 3, 3);
        auto inv = poly_map_inverse(m);
        auto prod = poly_map_product(m, inv);
        CHECK(prod.is_identity());  // as polynomials, not just pointwise
        for (long long n = -5; n <= 5; ++n) {
            auto g = m.eval(n) * inv.eval(n);
            CHECK(g.is_identity());
        }
        // degree bound from the back-substitution recursion: distance l holds
        // degree at most l * deg(m)
        for (int l = 1; l <= 3; ++l) CHECK(inv.degree_at_distance(l) <= l * m.degree());
    }
}

TEST_CASE("differences of abelian mappings reduce to polynomial differences") {
    // [[1, alpha n]]: one difference is constant, two vanish
    PolynomialMapping<Rational> lin(1, 1);
    lin.at(0, 0, 1) = poly({0, 7});
    auto d = poly_map_derivative(lin, 4);
    CHECK(d.at(0, 0, 1) == poly({28}));
    CHECK(poly_map_derivative(d, 2).is_identity());

    // [[1, alpha n^2]]: second difference 2 alpha h1 h2, third trivial
    PolynomialMapping<Rational> quad(1, 1);
    quad.at(0, 0, 1) = poly({0, 0, 3});
    auto d2 = poly_map_derivative(poly_map_derivative(quad, 5), 2);
    CHECK(d2.at(0, 0, 1) == poly({2 * 3 * 5 * 2}));
    CHECK(poly_map_derivative(d2, 9).is_identity());
}

TEST_CASE("derivatives of the Heisenberg sequence respect the layer structure") {
    auto m = heis_map(2, 3, 5);
    // second derivatives must land in T(1): distance-1 entries vanish
    std::mt19937_64 rng(10);
    std::uniform_int_distribution<long long> dh(1, 9);
    for (int rep = 0; rep < 10; ++rep) {
        auto d2 = poly_map_derivative(poly_map_derivative(m, dh(rng)), dh(rng));
        CHECK(d2.at(0, 0, 1).is_zero());
        CHECK(d2.at(0, 1, 2).is_zero());
    }
}

TEST_CASE("triviality depth") {
    PolynomialMapping<Rational> id(2, 1);
    CHECK(triviality_depth(id) == 0);

    PolynomialMapping<Rational> constant(2, 1);
    constant.at(0, 0, 1) = poly({5});
    constant.at(0, 0, 2) = poly({-2});
    CHECK(triviality_depth(constant) == 0);

    PolynomialMapping<Rational> lin(1, 1);
    lin.at(0, 0, 1) = poly({0, 7});
    CHECK(triviality_depth(lin) == 1);

    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 10; ++rep) {
        auto m = random_mapping(rng, 2, 2);
        int d = triviality_depth(m);
        CHECK(d <= depth_bound(2, 2));
        // stable under the order of the difference steps
        CHECK(triviality_depth(m, 777) == d);
        CHECK(triviality_depth(m, 31415) == d);
    }
}

TEST_CASE("product degrees are subadditive, symbolically") {
    std::mt19937_64 rng(21);
    for (int rep = 0; rep < 30; ++rep) {
        auto a = random_mapping(rng, 3, 1 + static_cast<int>(rng() % 3));
        auto b = random_mapping(rng, 3, 1 + static_cast<int>(rng() % 3));
        auto prod = poly_map_product(a, b);
        CHECK(prod.degree() <= a.degree() + b.degree());
    }
}

TEST_CASE("derivatives beyond the triviality depth are identity for any steps") {
    std::mt19937_64 rng(22);
    std::uniform_int_distribution<long long> dh(1, 50);
    for (int rep = 0; rep < 5; ++rep) {
        auto m = random_mapping(rng, 2, 2);
        int depth = triviality_depth(m);
        auto cur = m;
        for (int i = 0; i < depth + 1; ++i) cur = poly_map_derivative(cur, dh(rng));
        CHECK(cur.is_identity());
    }
}

TEST_CASE("layer death steps do not depend on the h draws") {
    std::mt19937_64 rng(12);
    for (int rep = 0; rep < 10; ++rep) {
        auto m = random_mapping(rng, 3, 3);
        auto s1 = death_schedule(m, 1);
        auto s2 = death_schedule(m, 999);
        CHECK(s1.layer_death == s2.layer_death);
        CHECK(s1.total_steps == s2.total_steps);
    }
}

TEST_CASE("polynomial sequences with respect to the lower central series") {
    // the Heisenberg example: entries of degree at most their distance
    CHECK(is_poly_sequence(heis_map(2, 3, 5), Filtration::lower_central(2, 1)));

    // the 4x4 example with cubic top corner
    PolynomialMapping<Rational> big(3, 1);
    big.at(0, 0, 1) = poly({0, 2});
    big.at(0, 1, 2) = poly({0, 3});
    big.at(0, 2, 3) = poly({0, 5});
    big.at(0, 0, 2) = poly({0, 0, 1});
    big.at(0, 1, 3) = poly({0, 0, 4});
    big.at(0, 0, 3) = poly({0, 0, 0, 2});
    CHECK(is_poly_sequence(big, Filtration::lower_central(3, 1)));

    // a quadratic entry in the abelian group is not an LCS polynomial sequence
    PolynomialMapping<Rational> quad(1, 1);
    quad.at(0, 0, 1) = poly({0, 0, 3});
    CHECK_FALSE(is_poly_sequence(quad, Filtration::lower_central(1, 1)));

    // but it is one for the dilated filtration
    auto fine = finer_filtration(1, 1, 2);
    CHECK(fine.degree == 2);
    CHECK(is_poly_sequence(quad, fine));

    // degree-1 mappings into the Heisenberg group need no refinement
    std::mt19937_64 rng(13);
    for (int rep = 0; rep < 5; ++rep)
        CHECK(is_poly_sequence(random_mapping(rng, 2, 1), Filtration::lower_central(2, 1)));
}

TEST_CASE("finer filtrations by degree") {
    auto f0 = finer_filtration(1, 1, 0);
    CHECK(f0.degree == 1);  // constants are already polynomial sequences

    auto f2 = finer_filtration(1, 1, 2);
    CHECK(f2.degree == 2);
    CHECK(f2.min_dist[1] == 0);
    CHECK(f2.min_dist[2] == 0);
    CHECK(f2.min_dist[3] == 1);

    // every random mapping of the advertised degree is a sequence for it
    std::mt19937_64 rng(14);
    for (int p = 1; p <= 2; ++p)
        for (int k = 1; k <= 3; ++k) {
            auto fine = finer_filtration(p, 1, k);
            for (int rep = 0; rep < 5; ++rep)
                CHECK(is_poly_sequence(random_mapping(rng, p, k), fine));
        }
}
