#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bracketlab/parse.hpp"
#include "bracketlab/report.hpp"

using namespace bracketlab;

TEST_CASE("delta shifts and subtracts on a narrowed domain") {
    auto sq = RealSeq<double>::tabulate(1, 20, [](long long n) { return double(n) * n; });
    auto d = delta(sq, 1);
    CHECK(d.lo == 1);
    CHECK(d.hi() == 19);
    for (long long n = 1; n <= 19; ++n) CHECK(d.at(n) == doctest::Approx(2.0 * n + 1.0));

    auto c = RealSeq<double>::tabulate(1, 10, [](long long) { return 3.25; });
    for (long long h = -3; h <= 3; ++h) {
        auto z = delta(c, h);
        for (const auto& v : z.values) CHECK(v == 0.0);
    }

    auto p = realize(parse_form("{3/10*n}"), Binding<Rational>{});
    auto s = seq_from_poly(p, 10);
    auto d2 = delta(s, 2);
    CHECK(d2.at(5) == Rational(-2, 5));

    CHECK(delta(c, 10).empty());
    CHECK(delta(c, -10).empty());
    CHECK(delta(c, 9).size() == 1);
}

TEST_CASE("iterated differences of a cubic are the constant 6 h1 h2 h3") {
    auto cube = RealSeq<Rational>::tabulate(
        1, 40, [](long long n) { return Rational(static_cast<long>(n * n * n)); });
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<long long> dh(-5, 5);
    for (int rep = 0; rep < 50; ++rep) {
        long long h1 = dh(rng), h2 = dh(rng), h3 = dh(rng);
        std::vector<long long> hs{h1, h2, h3};
        auto d = delta_iter(cube, hs);
        Rational want(static_cast<long>(6 * h1 * h2 * h3));
        for (const auto& v : d.values) CHECK(v == want);
    }
}

TEST_CASE("k differences annihilate genuine polynomials of degree below k") {
    auto p = realize(parse_form("a1*n^2 + a2*n + 3"),
                     Binding<Rational>{{1, Rational(7, 3)}, {2, Rational(-2, 5)}});
    auto s = seq_from_poly(p, 30);
    std::vector<long long> hs{2, -1, 3};
    auto d = delta_iter(s, hs);
    CHECK_FALSE(d.empty());
    for (const auto& v : d.values) CHECK(v == 0);
}

TEST_CASE("mixed differences commute") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> dv(-1.0, 1.0);
    std::uniform_int_distribution<long long> dh(-4, 4);
    for (int rep = 0; rep < 200; ++rep) {
        auto s = RealSeq<double>::tabulate(1, 30, [&](long long) { return dv(rng); });
        std::vector<long long> hs{dh(rng), dh(rng), dh(rng)};
        auto a = delta_iter(s, hs);
        std::vector<long long> perm = {hs[2], hs[0], hs[1]};
        auto b = delta_iter(s, perm);
        REQUIRE(a.lo == b.lo);
        REQUIRE(a.size() == b.size());
        for (long long n = a.lo; n <= a.hi(); ++n)
            CHECK(a.at(n) == doctest::Approx(b.at(n)).epsilon(1e-12));
    }
}

TEST_CASE("delta is linear in exact mode") {
    std::mt19937_64 rng(23);
    auto r = [&] {
        Rational q(static_cast<long>(rng() % 41) - 20, static_cast<long>(rng() % 13 + 1));
        q.canonicalize();
        return q;
    };
    for (int rep = 0; rep < 100; ++rep) {
        auto phi = RealSeq<Rational>::tabulate(1, 15, [&](long long) { return r(); });
        auto psi = RealSeq<Rational>::tabulate(1, 15, [&](long long) { return r(); });
        Rational a = r(), b = r();
        long long h = static_cast<long long>(rng() % 7) - 3;
        auto comb = RealSeq<Rational>::tabulate(1, 15, [&](long long n) {
            return Rational(a * phi.at(n) + b * psi.at(n));
        });
        auto lhs = delta(comb, h);
        auto d1 = delta(phi, h), d2 = delta(psi, h);
        for (long long n = lhs.lo; n <= lhs.hi(); ++n)
            CHECK(lhs.at(n) == Rational(a * d1.at(n) + b * d2.at(n)));
    }
}

TEST_CASE("difference of a product expands into the three cross terms") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> dv(-2.0, 2.0);
    for (int rep = 0; rep < 100; ++rep) {
        auto f = RealSeq<double>::tabulate(1, 20, [&](long long) { return dv(rng); });
        auto g = RealSeq<double>::tabulate(1, 20, [&](long long) { return dv(rng); });
        long long h = static_cast<long long>(rng() % 9) - 4;
        auto prod = RealSeq<double>::tabulate(1, 20, [&](long long n) { return f.at(n) * g.at(n); });
        auto lhs = delta(prod, h);
        auto df = delta(f, h), dg = delta(g, h);
        for (long long n = lhs.lo; n <= lhs.hi(); ++n) {
            double want = df.at(n) * dg.at(n) + df.at(n) * g.at(n) + f.at(n) * dg.at(n);
            CHECK(lhs.at(n) == doctest::Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("difference commutes with frac while the values stay in a narrow window") {
    // With {nu} mapped into J of width < 1/2 on B, the difference of {nu}
    // agrees with the reduced difference of nu on B intersect (B - h).
    std::mt19937_64 rng(31);
    const long long N = 400;
    for (int rep = 0; rep < 20; ++rep) {
        Rational alpha(static_cast<long>(rng() % 997 + 1), 997);
        auto nu = RealSeq<Rational>::tabulate(
            1, N, [&](long long n) { return Rational(alpha * static_cast<long>(n)); });
        auto fnu = RealSeq<Rational>::tabulate(1, N, [&](long long n) { return frac(nu.at(n)); });
        IntervalSpec J(Rational(-1, 5), Rational(1, 5), false, true);
        std::vector<char> inb(static_cast<std::size_t>(N + 1), 0);
        for (long long n = 1; n <= N; ++n)
            inb[static_cast<std::size_t>(n)] = J.contains(fnu.at(n)) ? 1 : 0;
        for (long long h = -3; h <= 3; ++h) {
            auto dfn = delta(fnu, h);
            auto dn = delta(nu, h);
            for (long long n = std::max<long long>(1, 1 - h); n <= std::min(N, N - h); ++n) {
                if (!inb[static_cast<std::size_t>(n)] || !inb[static_cast<std::size_t>(n + h)])
                    continue;
                CHECK(dfn.at(n) == frac(dn.at(n)));
            }
        }
    }
}

TEST_CASE("multiplicative difference of a unimodular phase is the phase of the difference") {
    auto ones = ComplexSeq::cyclic(std::vector<std::complex<double>>(8, {1.0, 0.0}), true);
    auto d = mult_delta(ones, 3);
    for (const auto& z : d.values) {
        CHECK(z.real() == doctest::Approx(1.0));
        CHECK(z.imag() == doctest::Approx(0.0));
    }

    // e(x/4) on Z/4 with h = 1: constant e(1/4)
    std::vector<std::complex<double>> v;
    for (int x = 0; x < 4; ++x) v.push_back(e_of(x / 4.0));
    auto f = ComplexSeq::cyclic(std::move(v), true);
    auto df = mult_delta(f, 1);
    for (const auto& z : df.values) {
        CHECK(z.real() == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(z.imag() == doctest::Approx(1.0).epsilon(1e-12));
    }

    // Delta*_h e(phi) = e(Delta_h phi) pointwise on an interval domain
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> dv(-3.0, 3.0);
    auto phi = RealSeq<double>::tabulate(1, 50, [&](long long) { return dv(rng); });
    auto ephi = phase_seq(phi);
    for (long long h : {-2LL, 1LL, 5LL}) {
        auto lhs = mult_delta(ephi, h);
        auto rhs = delta(phi, h);
        REQUIRE(lhs.lo == rhs.lo);
        for (long long n = rhs.lo; n <= rhs.hi(); ++n) {
            auto want = e_of(rhs.at(n));
            auto got = lhs.values[static_cast<std::size_t>(n - lhs.lo)];
            CHECK(std::abs(got - want) <= 1e-12);
        }
    }
}

TEST_CASE("sequences serialize to headered CSV") {
    auto s = RealSeq<Rational>::tabulate(3, 5, [](long long n) {
        Rational q(static_cast<long>(n), 2);
        q.canonicalize();
        return q;
    });
    CHECK(csv_from_seq(s) == "index,value\n3,3/2\n4,2\n5,5/2\n");

    auto c = ComplexSeq::cyclic({{1.0, 0.0}, {0.0, -1.0}});
    CHECK(csv_from_seq(c) == "index,re,im\n0,1,0\n1,0,-1\n");
}

TEST_CASE("fractional difference identity oracle") {
    IntervalSpec J(Rational(35, 100), Rational(1, 2), false, true);
    CHECK(frac_difference_check(0.4, 0.45, J));

    // premise fails: vacuously true even though the raw identity would not hold
    IntervalSpec J2 = IntervalSpec::centered(Rational(1, 10));
    CHECK(frac_difference_check(0.49, -0.49, J2));
    CHECK(std::abs((frac(0.49) - frac(-0.49)) - 0.98) < 1e-12);
    CHECK(std::abs(frac(0.49 - -0.49) - -0.02) < 1e-12);

    // centered case: the sum identity from the complementary half
    IntervalSpec I = IntervalSpec::centered(Rational(2, 10));
    CHECK(frac_difference_check(0.1, -0.1, I));
    CHECK(frac(0.1 + -0.1) == doctest::Approx(0.0));

    CHECK_THROWS_AS(frac_difference_check(0.0, 0.0, IntervalSpec::full()), Error);

    // exact mode sweep
    std::mt19937_64 rng(41);
    IntervalSpec Jr(Rational(-1, 8), Rational(1, 4), false, true);
    for (int rep = 0; rep < 300; ++rep) {
        Rational x(static_cast<long>(rng() % 2001) - 1000, 640);
        Rational y(static_cast<long>(rng() % 2001) - 1000, 640);
        x.canonicalize();
        y.canonicalize();
        CHECK(frac_difference_check(x, y, Jr));
    }
}
