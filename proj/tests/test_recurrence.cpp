#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bracketlab/parse.hpp"
#include "bracketlab/recurrence.hpp"

using namespace bracketlab;

namespace {

template <class R>
RecurrenceSetSpec<R> single_constraint(const BracketPoly<R>& nu, IntervalSpec S, long long N) {
    RecurrenceSetSpec<R> spec;
    spec.N = N;
    spec.constraints.emplace_back(nu, std::move(S));
    return spec;
}

}  // namespace

TEST_CASE("membership follows the fractional-part targets") {
    auto nu = realize(parse_form("1/4*n"), Binding<Rational>{});
    auto spec = single_constraint(nu, IntervalSpec::centered(Rational(3, 10)), 100);
    CHECK(spec.membership(3));        // {3/4} = -1/4
    CHECK_FALSE(spec.membership(2));  // {1/2} = 1/2
    CHECK(spec.membership(4));        // {1} = 0

    RecurrenceSetSpec<Rational> empty;
    empty.N = 10;
    for (long long n = 1; n <= 10; ++n) CHECK(empty.membership(n));
    CHECK_THROWS_AS(spec.membership(0), Error);
}

TEST_CASE("density scans") {
    auto nu = realize(parse_form("1/4*n"), Binding<Rational>{});
    auto spec = single_constraint(nu, IntervalSpec::centered(Rational(3, 10)), 100);
    CHECK(spec.density() == doctest::Approx(0.75));

    auto irr = realize(parse_form("a1*n"), Binding<double>{{1, std::numbers::sqrt2}});
    auto spec2 = single_constraint(irr, IntervalSpec::centered(Rational(1, 10)), 100000);
    CHECK(std::abs(spec2.density() - 0.2) <= 0.01);

    // a constant offset defeats recurrence: {1/2 + cn} stays near -1/2
    auto off = realize(parse_form("1/2 + 1/1000000*n"), Binding<Rational>{});
    auto spec3 = single_constraint(off, IntervalSpec::centered(Rational(1, 10)), 1000);
    CHECK(spec3.density() == 0.0);
}

TEST_CASE("pigeonhole captures the fullest cell") {
    // alternating 0, 1/2: one width-0.3 cell holds half of [100]
    std::vector<long long> dom(100);
    for (long long n = 1; n <= 100; ++n) dom[static_cast<std::size_t>(n - 1)] = n;

    auto g = RealSeq<Rational>::tabulate(
        1, 100, [](long long n) { return frac(Rational(static_cast<long>(n), 2)); });
    auto res = pigeonhole_intervals<Rational>({g}, dom, {Rational(3, 10)}, IntervalSpec::full());
    CHECK(res.subset.size() >= 50);
    REQUIRE(res.boxes.size() == 1);
    CHECK(res.boxes[0].width() <= Rational(3, 10));
    for (long long n : res.subset)
        CHECK(res.boxes[0].contains(frac(Rational(static_cast<long>(n), 2))));

    // uniform-ish values: the generic bound delta |A| / (2 width) = 5
    auto g2 = RealSeq<double>::tabulate(
        1, 100, [](long long n) { return frac(std::numbers::sqrt2 * n); });
    auto res2 = pigeonhole_intervals<double>({g2}, dom, {Rational(1, 10)}, IntervalSpec::full());
    CHECK(res2.subset.size() >= 5);

    // two functions: the product-cell bound delta1 delta2 |A| / (2 width)^2
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dv(-0.499, 0.5);
    auto h1 = RealSeq<double>::tabulate(1, 400, [&](long long) { return dv(rng); });
    auto h2 = RealSeq<double>::tabulate(1, 400, [&](long long) { return dv(rng); });
    std::vector<long long> dom2(400);
    for (long long n = 1; n <= 400; ++n) dom2[static_cast<std::size_t>(n - 1)] = n;
    auto res3 = pigeonhole_intervals<double>(
        {h1, h2}, dom2, {Rational(1, 4), Rational(1, 4)}, IntervalSpec::full());
    CHECK(res3.subset.size() >= 400 / 16 / 4);
}

TEST_CASE("constructive linear recurrence witnesses verify by direct evaluation") {
    // periodic case: multiples of 3
    auto w = linear_recurrence_witness<Rational>({Rational(1, 3)}, Rational(2, 10), 30);
    CHECK(w.size() >= 9);
    for (long long n : w) {
        CHECK(n % 3 == 0);
        CHECK(scalar_abs(frac(Rational(static_cast<long>(n), 3))) < Rational(2, 10));
    }

    // no constraints: all of [N]
    CHECK(linear_recurrence_witness<double>({}, Rational(1, 10), 12).size() == 12);

    // two irrational frequencies at N = 10^4
    std::vector<double> alphas{std::numbers::sqrt2, std::numbers::sqrt3};
    auto w2 = linear_recurrence_witness<double>(alphas, Rational(1, 10), 10000);
    CHECK_FALSE(w2.empty());
    for (long long n : w2)
        for (double a : alphas) CHECK(std::abs(frac(a * n)) < 0.1 + 1e-12);

    // random draws re-verify
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> da(0.0, 1.0), dd(0.05, 0.3);
    for (int rep = 0; rep < 20; ++rep) {
        int r = 1 + static_cast<int>(rng() % 3);
        std::vector<double> as;
        for (int i = 0; i < r; ++i) as.push_back(da(rng));
        Rational delta(static_cast<long>(dd(rng) * 1000), 1000);
        delta.canonicalize();
        auto ws = linear_recurrence_witness<double>(as, delta, 2000);
        CHECK_FALSE(ws.empty());
        for (long long n : ws)
            for (double a : as) CHECK(std::abs(frac(a * n)) < to_double(delta) + 1e-12);
    }
}

TEST_CASE("bracket overflow defeats the strong checker with an exact witness") {
    // phi(n) = {n/10} is locally linear on B = {n : {n/10} in (1/4, 1/2]}
    // but not strongly locally linear: the scan must surface n = 6,
    // h = (-1, -1) with derivative exactly -1.
    auto phi = realize(parse_form("{1/10*n}"), Binding<Rational>{});
    auto nu = realize(parse_form("1/10*n"), Binding<Rational>{});
    auto bset =
        single_constraint(nu, IntervalSpec(Rational(1, 4), Rational(1, 2), false, true), 60);
    auto B = bset.members();

    auto res = check_locally_poly(phi, B, 60, 2, LocalMode::Strong);
    REQUIRE(res.status == LocalCheckResult<Rational>::Status::Violation);
    REQUIRE(res.witness.has_value());
    CHECK(res.witness->n == 6);
    CHECK(res.witness->hs == std::vector<long long>{-1, -1});
    CHECK(res.witness->value == Rational(-1));

    // replaying the witness reproduces its derivative value exactly
    {
        const auto& w = *res.witness;
        Rational replay(0);
        for (unsigned omega = 0; omega < 4u; ++omega) {
            long long y = w.n;
            if (omega & 1) y += w.hs[0];
            if (omega & 2) y += w.hs[1];
            Rational term = eval(phi, y);
            replay = (2 - std::popcount(omega)) % 2 ? Rational(replay - term)
                                                    : Rational(replay + term);
        }
        CHECK(replay == w.value);
    }

    // plain mode on the same set is fine (n = 6 itself is outside B)
    auto plain = check_locally_poly(phi, B, 60, 2, LocalMode::Plain);
    CHECK(plain.status == LocalCheckResult<Rational>::Status::Certified);

    // randomized scanning can find a witness but never certifies
    CheckerBudget rnd{CheckerBudget::Mode::Randomized, 200000, 7};
    auto r2 = check_locally_poly(phi, B, 60, 2, LocalMode::Strong, std::nullopt, rnd);
    bool found = r2.status == LocalCheckResult<Rational>::Status::Violation;
    bool gave_up = r2.status == LocalCheckResult<Rational>::Status::NoWitnessFound;
    CHECK((found || gave_up));
    if (found) CHECK(r2.witness->value == Rational(-1));
}

TEST_CASE("genuine polynomials are locally polynomial everywhere") {
    auto p = realize(parse_form("a1*n^2 + a2*n"),
                     Binding<Rational>{{1, Rational(5, 7)}, {2, Rational(-3, 2)}});
    const long long N = 24;
    std::vector<long long> full(static_cast<std::size_t>(N));
    for (long long n = 1; n <= N; ++n) full[static_cast<std::size_t>(n - 1)] = n;
    for (auto mode : {LocalMode::Plain, LocalMode::Strong}) {
        auto res = check_locally_poly(p, full, N, 3, mode);
        CHECK(res.status == LocalCheckResult<Rational>::Status::Certified);
    }
}

TEST_CASE("a bracket quadratic is strongly locally quadratic on its narrow set") {
    // phi(n) = sqrt2 n {sqrt3 n} on {n : {sqrt3 n} in I_{1/16}}, three differences
    auto phi = realize(parse_form("a1*n*{a2*n}"),
                       Binding<double>{{1, std::numbers::sqrt2}, {2, std::numbers::sqrt3}});
    auto nu = realize(parse_form("a2*n"), Binding<double>{{2, std::numbers::sqrt3}});
    const long long N = 200;
    auto bset = single_constraint(nu, IntervalSpec::centered(Rational(1, 16)), N);
    auto B = bset.members();
    REQUIRE_FALSE(B.empty());
    auto res = check_locally_poly(phi, B, N, 3, LocalMode::Strong);
    CHECK(res.status == LocalCheckResult<double>::Status::Certified);
}

TEST_CASE("narrow component windows make bracket polynomials locally polynomial") {
    // windows of width 2^{-k-1} around zero, plain mode, exhaustive
    struct Case {
        const char* text;
        int degree;
    };
    for (auto [text, degree] :
         {Case{"{a1*n}", 1}, Case{"a1*n*{a2*n}", 2}, Case{"{a1*n*{a2*n}}", 2}}) {
        auto form = parse_form(text);
        REQUIRE(degree_bound(form) == degree);
        auto phi = realize(form,
                           Binding<double>{{1, std::numbers::sqrt2}, {2, std::numbers::sqrt3}});
        const long long N = 64;
        RecurrenceSetSpec<double> bset;
        bset.N = N;
        Rational width(1, 1L << (degree + 1));
        for (const auto& comp : components(phi))
            bset.constraints.emplace_back(comp, IntervalSpec::centered(width / 2));
        auto B = bset.members();
        auto res = check_locally_poly(phi, B, N, degree + 1, LocalMode::Plain);
        CHECK(res.status == LocalCheckResult<double>::Status::Certified);
    }
}

TEST_CASE("the strong-set builder enforces its inequalities") {
    CHECK(strong_local_ck(2) == Rational(1, 20));
    CHECK(strong_local_ck(3) == Rational(1, 56));

    auto phi = realize(parse_form("a1*n*{a2*n}"),
                       Binding<double>{{1, std::numbers::sqrt2}, {2, std::numbers::sqrt3}});
    // k = 2: delta <= 1/20, eps >= 2 delta
    Rational delta(1, 20), eps(1, 10);
    auto spec = strong_set_builder(phi, delta, eps, {IntervalSpec::centered(delta / 2)}, 100);
    CHECK(spec.constraints.size() == 1);

    CHECK_THROWS_WITH_AS(
        strong_set_builder(phi, Rational(1, 10), Rational(1, 5),
                           {IntervalSpec::centered(Rational(1, 20))}, 100),
        doctest::Contains("delta <= c_k"), Error);
    CHECK_THROWS_AS(
        strong_set_builder(phi, delta, Rational(1, 40), {IntervalSpec::centered(delta / 2)}, 100),
        Error);
    CHECK_THROWS_AS(strong_set_builder(phi, delta, eps, {}, 100), Error);
}

TEST_CASE("weak recurrence densities") {
    auto nu = realize(parse_form("a1*n"), Binding<double>{{1, std::numbers::sqrt2}});
    auto rep = weak_recurrence_check<double>({nu}, Rational(1, 10), 0.5, 10000);
    CHECK(std::abs(rep.density - 0.8) <= 0.02);
    CHECK(rep.holds);

    auto half = realize(parse_form("1/2*n"), Binding<double>{});
    auto rep2 = weak_recurrence_check<double>({half}, Rational(1, 10), 0.9, 10000);
    CHECK(std::abs(rep2.density - 0.5) <= 0.01);
    CHECK_FALSE(rep2.holds);

    auto rep3 = weak_recurrence_check<double>({half}, Rational(1, 10), 0.0, 100);
    CHECK(rep3.holds);

    CHECK_THROWS_AS(weak_recurrence_check<double>({nu}, Rational(1, 2), 0.5, 100), Error);
}

TEST_CASE("equal-step derivatives recover k! phi(h) inside the component set") {
    // genuine monomial: the classical identity holds for any progression
    auto mono = realize(parse_form("a1*n^2"), Binding<Rational>{{1, Rational(3, 7)}});
    auto rep = kth_derivative_identity_check(mono, 2, 5, 3, Rational(49, 100), 50);
    CHECK(rep.equal);
    CHECK(rep.rhs == Rational(2) * Rational(3, 7) * 9);

    // bracket quadratic: search a qualifying progression, then check
    auto phi = realize(parse_form("a1*n*{a2*n}"),
                       Binding<double>{{1, std::numbers::sqrt2}, {2, std::numbers::sqrt3}});
    const long long N = 4000;
    Rational eps = strong_local_ck(2);
    RecurrenceSetSpec<double> comp_set;
    comp_set.N = N;
    for (const auto& c : components(phi))
        comp_set.constraints.emplace_back(c, IntervalSpec::centered(eps));
    auto prog = find_progression(comp_set, 2);
    REQUIRE(prog.has_value());
    auto [n0, h0] = *prog;
    auto rep2 = kth_derivative_identity_check(phi, 2, n0, h0, eps, N);
    CHECK(rep2.equal);

    // a progression that exits the window is rejected
    bool threw = false;
    for (long long n = 1; n <= 100 && !threw; ++n) {
        try {
            kth_derivative_identity_check(phi, 2, n, 1, Rational(1, 100), N);
        } catch (const Error&) {
            threw = true;
        }
    }
    CHECK(threw);
}

TEST_CASE("progression dilation lands k!h in widened windows") {
    // phi = alpha n^2 with no bracket components
    auto phi = realize(parse_form("a1*n^2"), Binding<double>{{1, 0.137}});
    const long long N = 20000;
    const int k = 2;
    Rational delta(1, 100);
    // find a progression with {phi} inside a width-delta window J
    RecurrenceSetSpec<double> spec;
    spec.N = N / 2;  // floor(N/k!)
    IntervalSpec J = IntervalSpec::centered(delta / 2);
    spec.constraints.emplace_back(phi, J);
    auto prog = find_progression(spec, k);
    REQUIRE(prog.has_value());
    auto [n0, h0] = *prog;
    auto rep = ap_dilation_check<double>(phi, {}, n0, h0, k, J, delta, strong_local_ck(k), N);
    CHECK(rep.hypothesis_ok);
    // phi(k!h) = (k!)^2 phi(h) and k! phi(h) lands within a few delta
    CHECK(rep.phi_widening <= 24.0);

    // hypothesis breaches are reported
    auto bad = realize(parse_form("a1*n"), Binding<double>{{1, std::numbers::sqrt2}});
    CHECK_THROWS_AS(
        ap_dilation_check<double>(phi, {bad}, n0, h0, k, J, delta, strong_local_ck(k), N),
        Error);
}

TEST_CASE("progression pipeline for products of bracket linears") {
    // phi(n) = a0 n^{k-m} prod_i {a_i n}: pigeonhole {phi} into a window J
    // over the eps-recurrence set of the nu_i, find a (k+1)-term progression
    // inside the joint set, and verify the k!h dilation.  The quadratic cell
    // needs a longer range before progressions appear.
    struct Cell {
        const char* phi;
        std::vector<const char*> nus;
        int k;
        long long N;
        const char* delta;
    };
    std::vector<Cell> grid{
        {"a9*n*{a1*n}", {"a1*n"}, 2, 10000, "1/10"},
        {"a9*{a1*n}*{a2*n}", {"a1*n", "a2*n"}, 2, 10000, "1/10"},
        {"a9*n^2*{a1*n}", {"a1*n"}, 3, 100000, "1/4"},
    };
    Binding<double> bind{
        {1, std::numbers::sqrt2}, {2, std::numbers::sqrt3}, {9, std::numbers::phi}};
    for (const auto& cell : grid) {
        CAPTURE(cell.phi);
        auto phi = realize(parse_form(cell.phi), bind);
        std::vector<BracketPoly<double>> nus;
        for (const char* t : cell.nus) nus.push_back(realize(parse_form(t), bind));
        Rational eps = strong_local_ck(cell.k);
        Rational delta = rational_from_string(cell.delta);
        long long kfact = 1;
        for (int j = 2; j <= cell.k; ++j) kfact *= j;
        long long bound = cell.N / kfact;

        RecurrenceSetSpec<double> base;
        base.N = bound;
        for (const auto& nu : nus)
            base.constraints.emplace_back(nu, IntervalSpec::centered(eps));
        auto A = base.members();
        REQUIRE_FALSE(A.empty());

        std::vector<RealSeq<double>> gs{RealSeq<double>::tabulate(
            1, bound, [&](long long n) { return frac(eval(phi, n)); })};
        auto ph = pigeonhole_intervals(gs, A, {delta}, IntervalSpec::full());

        RecurrenceSetSpec<double> joint;
        joint.N = bound;
        joint.constraints.emplace_back(phi, ph.boxes[0]);
        for (const auto& nu : nus)
            joint.constraints.emplace_back(nu, IntervalSpec::centered(eps));
        auto prog = find_progression(joint, cell.k);
        REQUIRE(prog.has_value());

        auto rep = ap_dilation_check(phi, nus, prog->first, prog->second, cell.k,
                                     ph.boxes[0], delta, eps, cell.N);
        CHECK(rep.hypothesis_ok);
        CHECK(rep.addition_chain_ok);
        CHECK(rep.phi_widening <= 25.0);  // measured pilot maxima ~3
        for (double w : rep.nu_widenings) CHECK(w <= 25.0);
    }
}

TEST_CASE("derivatives of lambda n {nu n} are integer multiples of lambda n") {
    // nu = sqrt3 n is a genuine linear polynomial, strongly locally linear on
    // all of [N]; phi(n) = sqrt2 n {sqrt3 n}, three differences (k = 2)
    auto nu = realize(parse_form("a1*n"), Binding<double>{{1, std::numbers::sqrt3}});
    const long long N = 128;
    IntervalSpec J = IntervalSpec::centered(Rational(1, 8));  // width 1/4 = 2^-k
    std::vector<long long> A(static_cast<std::size_t>(N));
    for (long long n = 1; n <= N; ++n) A[static_cast<std::size_t>(n - 1)] = n;

    RecurrenceSetSpec<double> bset;
    bset.N = N;
    bset.constraints.emplace_back(nu, J);
    auto B = bset.members();
    std::vector<char> mask(static_cast<std::size_t>(N + 1), 0);
    for (long long b : B) mask[static_cast<std::size_t>(b)] = 1;

    int found = 0;
    for (long long n = 1; n <= N && found < 25; ++n) {
        for (long long h1 = -4; h1 <= 4; ++h1)
            for (long long h2 = -4; h2 <= 4; ++h2)
                for (long long h3 = -4; h3 <= 4; ++h3) {
                    std::vector<long long> hs{h1, h2, h3};
                    bool ok = true;
                    for (unsigned w = 1; ok && w < 8u; ++w) {
                        long long y = n;
                        if (w & 1) y += h1;
                        if (w & 2) y += h2;
                        if (w & 4) y += h3;
                        if (y < 1 || y > N || !mask[static_cast<std::size_t>(y)]) ok = false;
                    }
                    if (!ok) continue;
                    auto rep = simple_deriv_check<double>(std::numbers::sqrt2, nu, A, J, n, hs, N);
                    if (!rep.q_defined) continue;
                    ++found;
                    CHECK(rep.q_is_integer);
                    CHECK(std::abs(rep.q) <= 4.0 + 1e-8);
                }
    }
    CHECK(found > 0);

    // corners that leave the window are a precondition failure
    CHECK_THROWS_AS(simple_deriv_check<double>(std::numbers::sqrt2, nu, A,
                                               IntervalSpec::centered(Rational(1, 8)), 1,
                                               std::vector<long long>{50, 60, 70}, N),
                    Error);
}
