// Recurrence sets and local-polynomiality checkers.
//
// B_N(nu_1..nu_r; S_1..S_r) = {n in [N] : {nu_i(n)} in S_i for all i} with
// membership and density queries; the pigeonhole interval selector; the
// constructive witness set for simultaneous linear recurrence; and checkers
// for the three flavours of local polynomiality:
//
//   plain    Delta_{h_1..h_k} phi(n) = 0 whenever all 2^k corners n + omega.h
//            lie in B;
//   strong   the corner condition only for omega != 0;
//   approx   |Delta phi(n)| <= delta measured mod 1.
//
// The exhaustive scan visits n ascending and, for each n, the admissible
// difference tuples ordered by (|h|, h) per coordinate, so the first witness
// found is deterministic.  Tuples are enumerated through the corner values
// b_i = n + h_i in B, which makes sparse target sets cheap; the budget gate
// is still expressed in raw (n, h) tuples.  A randomized scan can only ever
// produce witnesses, never certify.

#pragma once

#include <optional>
#include <random>

#include "bracketlab/gowers.hpp"
#include "bracketlab/sequences.hpp"

namespace bracketlab {

template <class R>
struct RecurrenceSetSpec {
    long long N = 0;
    std::vector<std::pair<BracketPoly<R>, IntervalSpec>> constraints;

    bool membership(long long n) const {
        if (n < 1 || n > N) throw Error("membership query outside [1, N]");
        for (const auto& [nu, S] : constraints)
            if (!S.contains(frac(eval(nu, n)))) return false;
        return true;
    }

    std::vector<long long> members() const {
        std::vector<long long> out;
        for (long long n = 1; n <= N; ++n)
            if (membership(n)) out.push_back(n);
        return out;
    }

    double density() const {
        long long count = 0;
        for (long long n = 1; n <= N; ++n)
            if (membership(n)) ++count;
        return static_cast<double>(count) / static_cast<double>(N);
    }
};

// --- pigeonhole interval selection ------------------------------------------------

template <class R>
struct PigeonholeResult {
    std::vector<IntervalSpec> boxes;   // J_i, one per function
    std::vector<long long> subset;     // {n in A : g_i(n) in J_i for all i}
};

// Splits I into ceil(|I|/delta_i) right-closed cells per coordinate and
// returns the fullest product cell.  The subset size is at least
// prod(delta_i) |A| / (2^l |I|^l).
template <class R>
PigeonholeResult<R> pigeonhole_intervals(const std::vector<RealSeq<R>>& gs,
                                         const std::vector<long long>& A,
                                         const std::vector<Rational>& deltas,
                                         const IntervalSpec& I) {
    const std::size_t l = gs.size();
    if (deltas.size() != l) throw Error("need one delta per function");
    for (const auto& d : deltas)
        if (!(d > 0) || !(d < I.width())) throw Error("each delta must lie in (0, width(I))");

    std::vector<long long> cells(l);
    for (std::size_t i = 0; i < l; ++i) {
        Rational q = I.width() / deltas[i];
        cells[i] = static_cast<long long>(mpz_get_si(rat_ceil(q).get_mpz_t()));
    }

    auto cell_of = [&](std::size_t i, const R& value) -> long long {
        if constexpr (std::is_same_v<R, double>) {
            double rel = (value - to_double(I.lo)) / to_double(deltas[i]);
            long long c = static_cast<long long>(std::ceil(rel)) - 1;  // right-closed cells
            return std::clamp<long long>(c, 0, cells[i] - 1);
        } else {
            Rational rel = (Rational(value) - I.lo) / deltas[i];
            long long c = static_cast<long long>(mpz_get_si(rat_ceil(rel).get_mpz_t())) - 1;
            return std::clamp<long long>(c, 0, cells[i] - 1);
        }
    };

    std::map<std::vector<long long>, long long> histogram;
    for (long long n : A) {
        std::vector<long long> key(l);
        for (std::size_t i = 0; i < l; ++i) {
            if (!I.contains(gs[i].at(n))) throw Error("pigeonhole input leaves I");
            key[i] = cell_of(i, gs[i].at(n));
        }
        ++histogram[key];
    }

    std::vector<long long> best;
    long long best_count = -1;
    for (const auto& [key, count] : histogram) {
        if (count > best_count) {
            best_count = count;
            best = key;
        }
    }

    PigeonholeResult<R> out;
    out.boxes.reserve(l);
    for (std::size_t i = 0; i < l; ++i) {
        Rational lo = I.lo + deltas[i] * Rational(static_cast<long>(best[i]));
        Rational hi = lo + deltas[i];
        if (hi > I.hi) hi = I.hi;
        out.boxes.emplace_back(lo, hi, false, true);
    }
    for (long long n : A) {
        bool ok = true;
        for (std::size_t i = 0; ok && i < l; ++i)
            if (cell_of(i, gs[i].at(n)) != best[i]) ok = false;
        if (ok) out.subset.push_back(n);
    }
    return out;
}

// --- constructive linear recurrence ------------------------------------------------

// Pigeonholes (frac(alpha_j n))_j over [N] into width-delta cells, takes the
// fullest cell A and returns (max A - A) \ {0}; every returned n satisfies
// |alpha_j n| < delta mod 1 for all j.
template <class R>
std::vector<long long> linear_recurrence_witness(const std::vector<R>& alphas,
                                                 const Rational& delta, long long N) {
    if (!(delta > 0)) throw Error("delta must be positive");
    if (alphas.empty()) {
        std::vector<long long> all(static_cast<std::size_t>(N));
        for (long long n = 1; n <= N; ++n) all[static_cast<std::size_t>(n - 1)] = n;
        return all;
    }
    Rational d = delta < Rational(1, 2) ? delta : Rational(499, 1000);
    std::vector<RealSeq<R>> gs;
    gs.reserve(alphas.size());
    for (const auto& a : alphas) {
        gs.push_back(RealSeq<R>::tabulate(
            1, N, [&](long long n) { return frac(R(a * scalar_from_int<R>(n))); }));
    }
    std::vector<long long> domain(static_cast<std::size_t>(N));
    for (long long n = 1; n <= N; ++n) domain[static_cast<std::size_t>(n - 1)] = n;
    std::vector<Rational> deltas(alphas.size(), d);
    auto ph = pigeonhole_intervals(gs, domain, deltas, IntervalSpec::full());
    if (ph.subset.empty()) return {};
    long long m = ph.subset.back();
    std::vector<long long> out;
    for (long long a : ph.subset) {
        long long n = m - a;
        if (n != 0) out.push_back(n);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// --- local polynomiality -------------------------------------------------------------

enum class LocalMode { Plain, Strong, Approx };

template <class R>
struct ViolationWitness {
    long long n = 0;
    std::vector<long long> hs;
    R value{};  // the offending derivative (mod 1 in approx mode)
    LocalMode mode = LocalMode::Plain;
};

template <class R>
struct LocalCheckResult {
    enum class Status { Certified, NoWitnessFound, Violation };
    Status status = Status::Certified;
    std::optional<ViolationWitness<R>> witness;
    unsigned long long examined = 0;
};

struct CheckerBudget {
    enum class Mode { Exhaustive, Randomized };
    Mode mode = Mode::Exhaustive;
    unsigned long long max_tuples = 1ULL << 40;
    std::uint64_t seed = 1;
};

namespace detail {

template <class R>
bool derivative_violates(const std::vector<R>& phi_vals, long long n,
                         const std::vector<long long>& hs, int k, LocalMode mode,
                         const std::optional<Rational>& approx_delta, R& value_out) {
    R acc = scalar_from_int<R>(0);
    for (unsigned w = 0; w < (1u << k); ++w) {
        long long y = n;
        for (int i = 0; i < k; ++i)
            if (w & (1u << i)) y += hs[static_cast<std::size_t>(i)];
        const R& v = phi_vals[static_cast<std::size_t>(y - 1)];
        if ((k - std::popcount(w)) & 1) {
            acc = R(acc - v);
        } else {
            acc = R(acc + v);
        }
    }
    if (mode == LocalMode::Approx) {
        R residue = frac(acc);
        Rational tol = *approx_delta;
        bool bad;
        if constexpr (std::is_same_v<R, double>) {
            bad = std::abs(residue) > to_double(tol) + 1e-12;
        } else {
            bad = scalar_abs(residue) > tol;
        }
        value_out = residue;
        return bad;
    }
    value_out = acc;
    if constexpr (std::is_same_v<R, double>) {
        return std::abs(acc) > 1e-9;
    } else {
        return acc != 0;
    }
}

}  // namespace detail

// Scans for (n, h) with the required corners in B and a non-vanishing k-fold
// difference of phi.  B is given as a list of members of [1, N].
template <class R>
LocalCheckResult<R> check_locally_poly(const BracketPoly<R>& phi,
                                       const std::vector<long long>& B, long long N, int k,
                                       LocalMode mode,
                                       std::optional<Rational> approx_delta = std::nullopt,
                                       const CheckerBudget& budget = {}) {
    if (k < 1 || k > 6) throw Error("checker supports 1 <= k <= 6");
    if (mode == LocalMode::Approx && !approx_delta) throw Error("approx mode needs a delta");

    std::vector<char> mask(static_cast<std::size_t>(N + 1), 0);
    for (long long b : B) {
        if (b < 1 || b > N) throw Error("B must be a subset of [1, N]");
        mask[static_cast<std::size_t>(b)] = 1;
    }
    auto in_b = [&](long long v) { return v >= 1 && v <= N && mask[static_cast<std::size_t>(v)]; };

    std::vector<R> phi_vals;
    phi_vals.reserve(static_cast<std::size_t>(N));
    for (long long n = 1; n <= N; ++n) phi_vals.push_back(eval(phi, n));

    LocalCheckResult<R> res;

    if (budget.mode == CheckerBudget::Mode::Randomized) {
        std::mt19937_64 rng(budget.seed);
        std::uniform_int_distribution<long long> dn(1, N), dh(-N, N);
        std::vector<long long> hs(static_cast<std::size_t>(k));
        for (unsigned long long s = 0; s < budget.max_tuples; ++s) {
            long long n = dn(rng);
            for (auto& h : hs) h = dh(rng);
            bool ok = mode == LocalMode::Strong ? true : in_b(n);
            for (unsigned w = 1; ok && w < (1u << k); ++w) {
                long long y = n;
                for (int i = 0; i < k; ++i)
                    if (w & (1u << i)) y += hs[static_cast<std::size_t>(i)];
                if (!in_b(y)) ok = false;
            }
            ++res.examined;
            if (!ok) continue;
            R value{};
            if (detail::derivative_violates(phi_vals, n, hs, k, mode, approx_delta, value)) {
                res.status = LocalCheckResult<R>::Status::Violation;
                res.witness = ViolationWitness<R>{n, hs, value, mode};
                return res;
            }
        }
        res.status = LocalCheckResult<R>::Status::NoWitnessFound;
        return res;
    }

    // Exhaustive: gate on the raw tuple count, then enumerate through B.
    double raw = static_cast<double>(N) * std::pow(2.0 * static_cast<double>(N) + 1.0, k);
    if (raw > static_cast<double>(budget.max_tuples))
        throw Error("exhaustive checker budget exceeded; use a randomized budget");

    for (long long n = 1; n <= N; ++n) {
        if (mode != LocalMode::Strong && !in_b(n)) continue;
        // admissible single-step offsets, nearest first
        std::vector<long long> H;
        for (long long b = 1; b <= N; ++b)
            if (mask[static_cast<std::size_t>(b)]) H.push_back(b - n);
        std::sort(H.begin(), H.end(), [](long long a, long long b) {
            auto aa = std::llabs(a), bb = std::llabs(b);
            return aa != bb ? aa < bb : a < b;
        });
        if (H.empty()) continue;

        std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
        std::vector<long long> hs(static_cast<std::size_t>(k));
        for (;;) {
            for (int i = 0; i < k; ++i) hs[static_cast<std::size_t>(i)] = H[idx[static_cast<std::size_t>(i)]];
            bool ok = true;
            for (unsigned w = 1; ok && w < (1u << k); ++w) {
                if (std::popcount(w) == 1) continue;
                long long y = n;
                for (int i = 0; i < k; ++i)
                    if (w & (1u << i)) y += hs[static_cast<std::size_t>(i)];
                if (!in_b(y)) ok = false;
            }
            ++res.examined;
            if (ok) {
                R value{};
                if (detail::derivative_violates(phi_vals, n, hs, k, mode, approx_delta, value)) {
                    res.status = LocalCheckResult<R>::Status::Violation;
                    res.witness = ViolationWitness<R>{n, hs, value, mode};
                    return res;
                }
            }
            int pos = k - 1;
            while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == H.size()) {
                idx[static_cast<std::size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) break;
        }
    }
    res.status = LocalCheckResult<R>::Status::Certified;
    return res;
}

// --- derived constants and set builders ------------------------------------------------

// c_k = 2^{-k} (2k+1)^{-1}.
inline Rational strong_local_ck(int k) {
    if (k < 1) throw Error("c_k needs k >= 1");
    return Rational(1, (1L << k) * (2L * k + 1));
}

// Builds B_N(nu_1..nu_m; J_1..J_m) over the bracket components of phi after
// validating the width/centering preconditions under which the set is
// guaranteed strongly locally polynomial.
template <class R>
RecurrenceSetSpec<R> strong_set_builder(const BracketPoly<R>& phi, const Rational& delta,
                                        const Rational& eps,
                                        const std::vector<IntervalSpec>& Js, long long N) {
    const int k = degree_bound(phi);
    const Rational ck = strong_local_ck(k);
    if (delta > ck)
        throw Error("precondition failed: delta <= c_k (got delta = " + to_string(delta) +
                    ", c_" + std::to_string(k) + " = " + to_string(ck) + ")");
    if (eps < Rational(static_cast<long>(k)) * delta)
        throw Error("precondition failed: eps >= k*delta (got eps = " + to_string(eps) + ")");
    auto comps = components(phi);
    if (Js.size() != comps.size())
        throw Error("need exactly one interval per bracket component (" +
                    std::to_string(comps.size()) + " components)");
    IntervalSpec window = IntervalSpec::centered(Rational(1, 2) - eps);
    RecurrenceSetSpec<R> spec;
    spec.N = N;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        if (Js[i].width() > delta)
            throw Error("precondition failed: width(J_" + std::to_string(i + 1) +
                        ") <= delta");
        if (!Js[i].inside(window))
            throw Error("precondition failed: J_" + std::to_string(i + 1) +
                        " inside I_{1/2-eps}");
        spec.constraints.emplace_back(comps[i], Js[i]);
    }
    return spec;
}

template <class R>
struct WeakRecurrenceReport {
    double density = 0.0;
    bool holds = false;
};

// (eps, lambda)-weak recurrence: the set with targets I_{1/2-eps} has density
// at least lambda.
template <class R>
WeakRecurrenceReport<R> weak_recurrence_check(const std::vector<BracketPoly<R>>& nus,
                                              const Rational& eps, double lambda,
                                              long long N) {
    if (!(eps > 0) || !(eps < Rational(1, 2))) throw Error("need 0 < eps < 1/2");
    RecurrenceSetSpec<R> spec;
    spec.N = N;
    IntervalSpec target = IntervalSpec::centered(Rational(1, 2) - eps);
    for (const auto& nu : nus) spec.constraints.emplace_back(nu, target);
    WeakRecurrenceReport<R> rep;
    rep.density = spec.density();
    rep.holds = rep.density >= lambda;
    return rep;
}

// --- equal-step derivative identity -------------------------------------------------------

template <class R>
struct DerivIdentityReport {
    R lhs{};  // (Delta_h)^k phi at n
    R rhs{};  // k! phi(h)
    bool equal = false;
};

// Checks (Delta_h)^k phi(n) = k! phi(h) on a progression that stays inside
// the component set B_N(components; I_eps, ...).
template <class R>
DerivIdentityReport<R> kth_derivative_identity_check(const BracketPoly<R>& phi, int k,
                                                     long long n, long long h,
                                                     const Rational& eps, long long N) {
    auto comps = components(phi);
    IntervalSpec window = IntervalSpec::centered(eps);
    for (int j = 0; j <= k; ++j) {
        long long pt = n + static_cast<long long>(j) * h;
        if (pt < 1 || pt > N)
            throw Error("progression leaves [1, N] at step " + std::to_string(j));
        for (const auto& nu : comps) {
            if (!window.contains(frac(eval(nu, pt))))
                throw Error("progression leaves the component set at step " + std::to_string(j));
        }
    }
    DerivIdentityReport<R> rep;
    R lhs = scalar_from_int<R>(0);
    long long binom = 1;
    for (int j = 0; j <= k; ++j) {
        // C(k, j), alternating (-1)^{k-j}
        R term = R(scalar_from_int<R>(binom) * eval(phi, n + static_cast<long long>(j) * h));
        if ((k - j) & 1) {
            lhs = R(lhs - term);
        } else {
            lhs = R(lhs + term);
        }
        binom = binom * (k - j) / (j + 1);
    }
    long long kfact = 1;
    for (int j = 2; j <= k; ++j) kfact *= j;
    rep.lhs = lhs;
    rep.rhs = R(scalar_from_int<R>(kfact) * eval(phi, h));
    if constexpr (std::is_same_v<R, double>) {
        rep.equal = std::abs(rep.lhs - rep.rhs) <= 1e-9;
    } else {
        rep.equal = rep.lhs == rep.rhs;
    }
    return rep;
}

// --- progression dilation ------------------------------------------------------------------

template <class R>
struct ApDilationReport {
    bool hypothesis_ok = false;
    double phi_widening = 0.0;                // |{phi(k!h)}| / delta
    std::vector<double> nu_widenings;         // |{nu_i(k!h)}| / eps
    bool addition_chain_ok = false;           // {x}+{y}={x+y} steps along the dilation
    long long dilated = 0;                    // k! h
};

// Verifies that a (k+1)-term progression inside
// B_{floor(N/k!)}(phi, nu_1..nu_r; J, I_eps, ...) forces k!h into the widened
// set, and reports the smallest widening factors observed.
template <class R>
ApDilationReport<R> ap_dilation_check(const BracketPoly<R>& phi,
                                      const std::vector<BracketPoly<R>>& nus, long long n,
                                      long long h, int k, const IntervalSpec& J,
                                      const Rational& delta, const Rational& eps, long long N,
                                      std::optional<Rational> chat_k = std::nullopt) {
    Rational cap = chat_k.value_or(strong_local_ck(k));
    if (eps > cap) throw Error("precondition failed: eps <= c^_k");
    if (J.width() > delta) throw Error("precondition failed: width(J) <= delta");
    long long kfact = 1;
    for (int j = 2; j <= k; ++j) kfact *= j;
    const long long bound = N / kfact;

    ApDilationReport<R> rep;
    rep.dilated = kfact * h;
    IntervalSpec window = IntervalSpec::centered(eps);
    for (int j = 0; j <= k; ++j) {
        long long pt = n + static_cast<long long>(j) * h;
        if (pt < 1 || pt > bound)
            throw Error("progression leaves [1, floor(N/k!)] at step " + std::to_string(j));
        if (!J.contains(frac(eval(phi, pt))))
            throw Error("hypothesis breach: {phi} leaves J at step " + std::to_string(j));
        for (std::size_t i = 0; i < nus.size(); ++i)
            if (!window.contains(frac(eval(nus[i], pt))))
                throw Error("hypothesis breach: {nu_" + std::to_string(i + 1) +
                            "} leaves I_eps at step " + std::to_string(j));
    }
    rep.hypothesis_ok = true;

    const long long m = rep.dilated;
    rep.phi_widening = std::abs(to_double(frac(eval(phi, m)))) / to_double(delta);
    rep.nu_widenings.reserve(nus.size());
    for (const auto& nu : nus)
        rep.nu_widenings.push_back(std::abs(to_double(frac(eval(nu, m)))) / to_double(eps));

    // Walk the centered addition chain {x} + {y} = {x + y}: j{nu(h)} should
    // track {nu(jh)} for j = 2..k! while the accumulating value stays inside
    // (-1/2, 1/2).
    rep.addition_chain_ok = true;
    for (const auto& nu : nus) {
        R base = frac(eval(nu, h));
        R acc = base;
        for (long long j = 2; j <= kfact && rep.addition_chain_ok; ++j) {
            acc = R(acc + base);
            if (!(scalar_abs(acc) < scalar_from_int<R>(1) / scalar_from_int<R>(2))) {
                rep.addition_chain_ok = false;
                break;
            }
            R direct = frac(eval(nu, static_cast<long long>(j) * h));
            if constexpr (std::is_same_v<R, double>) {
                if (std::abs(acc - direct) > 1e-9) rep.addition_chain_ok = false;
            } else {
                if (acc != direct) rep.addition_chain_ok = false;
            }
        }
    }
    return rep;
}

// First (k+1)-term arithmetic progression inside the recurrence set, scanning
// common differences ascending; n ascending within each h.
template <class R>
std::optional<std::pair<long long, long long>> find_progression(
    const RecurrenceSetSpec<R>& spec, int k) {
    auto mem = spec.members();
    std::vector<char> mask(static_cast<std::size_t>(spec.N + 1), 0);
    for (long long n : mem) mask[static_cast<std::size_t>(n)] = 1;
    for (long long h = 1; h <= spec.N / std::max(1, k); ++h) {
        for (long long n : mem) {
            if (n + static_cast<long long>(k) * h > spec.N) break;
            bool ok = true;
            for (int j = 1; ok && j <= k; ++j)
                if (!mask[static_cast<std::size_t>(n + static_cast<long long>(j) * h)]) ok = false;
            if (ok) return std::make_pair(n, h);
        }
    }
    return std::nullopt;
}

// --- (k+1)-fold derivative of lambda n {nu(n)} ----------------------------------------------

template <class R>
struct SimpleDerivReport {
    R value{};          // Delta_{h_1..h_{k+1}} phi(n)
    double q = 0.0;     // value / (lambda n)
    bool q_defined = false;
    bool q_is_integer = false;
};

// For phi(n) = lambda n {nu(n)} with nu strongly locally polynomial of degree
// k-1 on A, the (k+1)-fold derivative lands in {q lambda n : q integer} when
// the omega != 0 corners stay inside B_N(nu; J) intersect A.
template <class R>
SimpleDerivReport<R> simple_deriv_check(const R& lambda, const BracketPoly<R>& nu,
                                        const std::vector<long long>& A,
                                        const IntervalSpec& J, long long n,
                                        const std::vector<long long>& hs, long long N) {
    const int k1 = static_cast<int>(hs.size());  // k+1 difference parameters
    const int k = k1 - 1;
    if (k < 1) throw Error("need at least two difference parameters");
    if (J.width() > Rational(1, 1L << k)) throw Error("precondition failed: width(J) <= 2^-k");

    std::vector<char> a_mask(static_cast<std::size_t>(N + 1), 0);
    for (long long a : A) a_mask[static_cast<std::size_t>(a)] = 1;
    auto corner_ok = [&](long long y) {
        return y >= 1 && y <= N && a_mask[static_cast<std::size_t>(y)] &&
               J.contains(frac(eval(nu, y)));
    };
    for (unsigned w = 1; w < (1u << k1); ++w) {
        long long y = n;
        for (int i = 0; i < k1; ++i)
            if (w & (1u << i)) y += hs[static_cast<std::size_t>(i)];
        if (!corner_ok(y))
            throw Error("corner outside B_N(nu; J) intersect A");
    }

    auto phi_at = [&](long long m) {
        return R(lambda * scalar_from_int<R>(m) * frac(eval(nu, m)));
    };
    SimpleDerivReport<R> rep;
    R acc = scalar_from_int<R>(0);
    for (unsigned w = 0; w < (1u << k1); ++w) {
        long long y = n;
        for (int i = 0; i < k1; ++i)
            if (w & (1u << i)) y += hs[static_cast<std::size_t>(i)];
        if ((k1 - std::popcount(w)) & 1) {
            acc = R(acc - phi_at(y));
        } else {
            acc = R(acc + phi_at(y));
        }
    }
    rep.value = acc;
    R denom = R(lambda * scalar_from_int<R>(n));
    if (scalar_is_zero(denom, 1e-300)) {
        rep.q_defined = false;
        return rep;
    }
    rep.q_defined = true;
    if constexpr (std::is_same_v<R, double>) {
        rep.q = acc / denom;
        rep.q_is_integer = is_integer_value(rep.q, 1e-8);
    } else {
        Rational q = acc / denom;
        rep.q = to_double(q);
        rep.q_is_integer = is_integer_value(q);
    }
    return rep;
}

}  // namespace bracketlab
