// Gowers uniformity norms on Z/N~Z and on [N].
//
// The U^k(G) norm of f : G -> C is the 2^k-th root of the average of the
// 2^k-fold multiplicative difference Delta*_{h_1..h_k} f(x) over x and the
// h_i.  The [N] norm zero-pads f into Z/N~Z for some N~ >= 2^k N and divides
// by the same quantity for the indicator of [N]; the result does not depend
// on the choice of N~, which is defaulted to the smallest power of two
// >= 2^k N so the Fourier base case can use a radix-2 transform.
//
// Evaluation strategies:
//   direct        definitional sum over all (x, h); cost |G|^{k+1} 2^k.
//   recursive-fft peel k-2 difference parameters, finish with the U^2 base
//                 case  ||g||_{U^2}^4 = sum_xi |g^(xi)|^4  (g^ the normalized
//                 Fourier transform); cost |G|^{k-2} transforms.
//   monte-carlo   sample the peeled difference tuples; reports mean,
//                 standard error and a 99% lower confidence bound.
//
// All reductions use fixed-order compensated summation (parallel.hpp), so
// serial and parallel runs agree bit for bit.

#pragma once

#include <algorithm>
#include <bit>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>

#include "bracketlab/fft.hpp"
#include "bracketlab/parallel.hpp"
#include "bracketlab/sequences.hpp"

namespace bracketlab {

enum class Method { Auto, Direct, Recursive, MonteCarlo };

inline std::string method_name(Method m) {
    switch (m) {
        case Method::Direct: return "direct";
        case Method::Recursive: return "recursive-fft";
        case Method::MonteCarlo: return "monte-carlo";
        default: return "auto";
    }
}

struct McOptions {
    long long samples = 100000;
    std::uint64_t seed = 1;
};

inline constexpr double kZ99 = 2.5758293035489004;  // 99% two-sided normal quantile

struct GroupNormResult {
    double norm = 0.0;
    double mean_pow = 0.0;  // the 2^k-fold average before the root
    Method method = Method::Direct;
    std::optional<double> mc_stderr;   // standard error of the norm
    std::optional<double> mc_lower99;  // 99% lower confidence bound for the norm
    long long samples = 0;
};

namespace detail {

inline thread_local int in_parallel_region = 0;

struct ParallelGuard {
    ParallelGuard() { ++in_parallel_region; }
    ~ParallelGuard() { --in_parallel_region; }
};

inline std::vector<std::complex<double>> mult_delta_vec(
    const std::vector<std::complex<double>>& f, long long h) {
    const long long m = static_cast<long long>(f.size());
    std::vector<std::complex<double>> g(f.size());
    long long hh = ((h % m) + m) % m;
    for (long long x = 0; x < m; ++x) {
        long long y = x + hh;
        if (y >= m) y -= m;
        g[static_cast<std::size_t>(x)] =
            f[static_cast<std::size_t>(y)] * std::conj(f[static_cast<std::size_t>(x)]);
    }
    return g;
}

// ||g||_{U^2}^4 = sum_xi |g^(xi)|^4 with g^(xi) = (1/m) sum_x g(x) e(-xi x/m).
inline double u2_mean(const std::vector<std::complex<double>>& g) {
    const double m = static_cast<double>(g.size());
    auto spec = forward_transform(g);
    KahanSum acc;
    for (const auto& z : spec) {
        const double a2 = std::norm(z);
        acc.add(a2 * a2);
    }
    return acc.sum / (m * m * m * m);
}

inline double uk_mean_recursive(const std::vector<std::complex<double>>& f, int k) {
    if (k == 2) return u2_mean(f);
    const long long m = static_cast<long long>(f.size());
    double s;
    if (in_parallel_region) {
        KahanSum acc;
        for (long long h = 0; h < m; ++h) acc.add(uk_mean_recursive(mult_delta_vec(f, h), k - 1));
        s = acc.sum;
    } else {
        ParallelGuard guard_marker;  // children stay serial inside det_sum workers
        s = det_sum(m, [&](long long h) {
            ParallelGuard g2;
            return uk_mean_recursive(mult_delta_vec(f, h), k - 1);
        });
    }
    return s / static_cast<double>(m);
}

inline std::complex<double> uk_mean_direct(const std::vector<std::complex<double>>& f, int k) {
    const long long m = static_cast<long long>(f.size());
    double terms = 1.0;
    for (int i = 0; i <= k; ++i) terms *= static_cast<double>(m);
    if (terms * static_cast<double>(1 << k) > 4e9)
        throw Error("direct Gowers sum too large; use recursive or monte-carlo");

    long long hcombos = 1;
    for (int i = 0; i < k; ++i) hcombos *= m;

    auto total = det_sum_complex(hcombos, [&](long long idx) {
        std::vector<long long> h(static_cast<std::size_t>(k));
        long long t = idx;
        for (int i = 0; i < k; ++i) {
            h[static_cast<std::size_t>(i)] = t % m;
            t /= m;
        }
        KahanComplex acc;
        for (long long x = 0; x < m; ++x) {
            std::complex<double> prod(1.0, 0.0);
            for (unsigned w = 0; w < (1u << k); ++w) {
                long long y = x;
                for (int i = 0; i < k; ++i)
                    if (w & (1u << i)) y += h[static_cast<std::size_t>(i)];
                std::complex<double> v = f[static_cast<std::size_t>(((y % m) + m) % m)];
                if (std::popcount(w) & 1) v = std::conj(v);
                prod *= v;
            }
            acc.add(prod);
        }
        return acc.value();
    });
    double denom = static_cast<double>(hcombos) * static_cast<double>(m);
    return total / denom;
}

struct McAccum {
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    long long n = 0;
    void add(double x, double y) {
        sx += x; sy += y; sxx += x * x; syy += y * y; sxy += x * y; ++n;
    }
    void merge(const McAccum& o) {
        sx += o.sx; sy += o.sy; sxx += o.sxx; syy += o.syy; sxy += o.sxy; n += o.n;
    }
    double mean_x() const { return sx / static_cast<double>(n); }
    double mean_y() const { return sy / static_cast<double>(n); }
    double var_x() const { return std::max(0.0, sxx / n - mean_x() * mean_x()); }
    double var_y() const { return std::max(0.0, syy / n - mean_y() * mean_y()); }
    double cov() const { return sxy / n - mean_x() * mean_y(); }
};

// Samples the k-2 peeled difference parameters for f (and optionally a paired
// function g with the same tuples, for ratio estimates).  When `offsets` is
// non-null the h_i are drawn uniformly from it instead of the whole group;
// for zero-padded interval functions both integrands vanish off the set of
// offsets with overlapping support, so the restriction rescales numerator and
// denominator by the same known factor and leaves their ratio untouched.
inline McAccum mc_sample_pairs(const std::vector<std::complex<double>>& f,
                               const std::vector<std::complex<double>>* g, int k,
                               const McOptions& opt,
                               const std::vector<long long>* offsets = nullptr) {
    if (opt.samples < 1000) throw Error("monte-carlo refuses to report with fewer than 1000 samples");
    const long long m = static_cast<long long>(f.size());
    const int peel = k - 2;
    const long long chunks = std::min<long long>(detail::kChunks, opt.samples);
    std::vector<McAccum> partial(static_cast<std::size_t>(chunks));
    const long long domain = offsets ? static_cast<long long>(offsets->size()) : m;
    run_chunked(opt.samples, [&](long long c, long long lo, long long hi) {
        std::mt19937_64 rng(opt.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(c + 1)));
        std::uniform_int_distribution<long long> dist(0, domain - 1);
        McAccum acc;
        for (long long s = lo; s < hi; ++s) {
            std::vector<long long> hs(static_cast<std::size_t>(peel));
            for (auto& h : hs) h = offsets ? (*offsets)[static_cast<std::size_t>(dist(rng))]
                                           : dist(rng);
            std::vector<std::complex<double>> a = f;
            for (long long h : hs) a = mult_delta_vec(a, h);
            double x = u2_mean(a);
            double y = 0.0;
            if (g) {
                std::vector<std::complex<double>> b = *g;
                for (long long h : hs) b = mult_delta_vec(b, h);
                y = u2_mean(b);
            }
            acc.add(x, y);
        }
        partial[static_cast<std::size_t>(c)] = acc;
    });
    McAccum total;
    for (const auto& p : partial) total.merge(p);
    return total;
}

}  // namespace detail

inline Method resolve_method(Method m, int k) {
    if (m != Method::Auto) return m;
    if (k <= 4) return Method::Recursive;
    return Method::MonteCarlo;
}

// ||f||_{U^k(Z/mZ)} for a cyclic sequence f.
inline GroupNormResult gowers_norm_group(const ComplexSeq& f, int k,
                                         Method method = Method::Auto,
                                         const McOptions& mc = {}) {
    if (f.domain != ComplexSeq::Domain::Cyclic) throw Error("gowers_norm_group expects a cyclic sequence");
    if (k < 2) throw Error("Gowers norms need k >= 2");
    if (k > 5) throw Error("U^k with k > 5 is out of range");
    method = resolve_method(method, k);

    GroupNormResult out;
    out.method = method;
    const double root = 1.0 / static_cast<double>(1 << k);

    if (method == Method::Direct) {
        auto mean = detail::uk_mean_direct(f.values, k);
        if (std::abs(mean.imag()) > 1e-12)
            throw Error("Gowers average has a non-negligible imaginary part");
        if (mean.real() < -1e-12) throw Error("Gowers average is negative");
        out.mean_pow = std::max(0.0, mean.real());
        out.norm = std::pow(out.mean_pow, root);
        return out;
    }
    if (method == Method::Recursive) {
        out.mean_pow = detail::uk_mean_recursive(f.values, k);
        if (out.mean_pow < -1e-12) throw Error("Gowers average is negative");
        out.mean_pow = std::max(0.0, out.mean_pow);
        out.norm = std::pow(out.mean_pow, root);
        return out;
    }
    // Monte Carlo over the peeled difference tuples.
    if (k == 2) return gowers_norm_group(f, k, Method::Recursive);
    auto acc = detail::mc_sample_pairs(f.values, nullptr, k, mc);
    out.samples = acc.n;
    out.mean_pow = acc.mean_x();
    const double se_mean = std::sqrt(acc.var_x() / static_cast<double>(acc.n));
    out.norm = std::pow(std::max(0.0, out.mean_pow), root);
    // Delta method through t -> t^{1/2^k}.
    if (out.mean_pow > 0) {
        out.mc_stderr = se_mean * root * std::pow(out.mean_pow, root - 1.0);
        double lo = std::max(0.0, out.mean_pow - kZ99 * se_mean);
        out.mc_lower99 = std::pow(lo, root);
    } else {
        out.mc_stderr = 0.0;
        out.mc_lower99 = 0.0;
    }
    return out;
}

struct GowersReport {
    int k = 2;
    long long N = 0;
    long long Ntilde = 0;
    double norm = 0.0;
    double normalizer = 0.0;
    Method method = Method::Recursive;
    std::optional<double> mc_stderr;
    std::optional<double> mc_lower99;
    std::optional<std::uint64_t> seed;
    long long mc_samples = 0;
};

inline long long default_ntilde(int k, long long N) {
    long long need = N << k;
    long long p = 1;
    while (p < need) p <<= 1;
    return p;
}

namespace detail {

inline std::vector<std::complex<double>> pad_to_group(const ComplexSeq& f, long long ntilde) {
    std::vector<std::complex<double>> v(static_cast<std::size_t>(ntilde), {0.0, 0.0});
    for (long long n = f.lo; n <= f.hi(); ++n)
        v[static_cast<std::size_t>(((n % ntilde) + ntilde) % ntilde)] =
            f.values[static_cast<std::size_t>(n - f.lo)];
    return v;
}

inline std::vector<std::complex<double>> indicator_group(long long N, long long ntilde) {
    std::vector<std::complex<double>> v(static_cast<std::size_t>(ntilde), {0.0, 0.0});
    for (long long n = 1; n <= N; ++n) v[static_cast<std::size_t>(n)] = {1.0, 0.0};
    return v;
}

// The normalizer ||1_[N]||^{2^k} is computed, never assumed; identical
// (k, N~, N, method) queries are cached.
inline double indicator_mean_cached(int k, long long N, long long ntilde, Method method) {
    static std::mutex mu;
    static std::unordered_map<std::string, double> cache;
    std::string key = std::to_string(k) + ":" + std::to_string(N) + ":" +
                      std::to_string(ntilde) + ":" + method_name(method);
    {
        std::lock_guard<std::mutex> lock(mu);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    auto ind = indicator_group(N, ntilde);
    double mean = method == Method::Direct
                      ? uk_mean_direct(ind, k).real()
                      : uk_mean_recursive(ind, k);
    std::lock_guard<std::mutex> lock(mu);
    cache[key] = mean;
    return mean;
}

}  // namespace detail

// ||f||_{U^k[N]}: pad to Z/N~Z, divide by the padded-indicator norm computed
// with the same N~ and method.
inline GowersReport gowers_norm_interval(const ComplexSeq& f, int k,
                                         std::optional<long long> ntilde_opt = std::nullopt,
                                         Method method = Method::Auto,
                                         const McOptions& mc = {}) {
    if (f.domain != ComplexSeq::Domain::Interval || f.lo != 1)
        throw Error("gowers_norm_interval expects a sequence on [1, N]");
    if (k < 2) throw Error("Gowers norms need k >= 2");
    if (k > 5) throw Error("U^k with k > 5 is out of range");
    const long long N = f.size();
    const long long ntilde = ntilde_opt.value_or(default_ntilde(k, N));
    if (ntilde < (N << k)) throw Error("Ntilde must be at least 2^k * N");
    method = resolve_method(method, k);

    GowersReport rep;
    rep.k = k;
    rep.N = N;
    rep.Ntilde = ntilde;
    rep.method = method;
    const double root = 1.0 / static_cast<double>(1 << k);

    auto padded = detail::pad_to_group(f, ntilde);

    if (method == Method::MonteCarlo && k >= 3) {
        auto ind = detail::indicator_group(N, ntilde);
        // Difference offsets outside (-(N-1), N-1) mod Ntilde leave the padded
        // support with empty overlap, so both integrands are zero there;
        // sampling only the overlapping offsets rescales numerator and
        // denominator by ((2N-1)/Ntilde)^{k-2}, which cancels in the ratio.
        std::vector<long long> offsets;
        offsets.reserve(static_cast<std::size_t>(2 * N - 1));
        for (long long h = -(N - 1); h <= N - 1; ++h) offsets.push_back(((h % ntilde) + ntilde) % ntilde);
        auto acc = detail::mc_sample_pairs(padded, &ind, k, mc, &offsets);
        rep.mc_samples = acc.n;
        rep.seed = mc.seed;
        const double mx = acc.mean_x(), my = acc.mean_y();
        if (my <= 0) throw Error("indicator normalizer estimate vanished");
        const double r = mx / my;
        const double n = static_cast<double>(acc.n);
        const double var_r = acc.var_x() / (my * my * n) +
                             (mx * mx) * acc.var_y() / (my * my * my * my * n) -
                             2.0 * mx * acc.cov() / (my * my * my * n);
        const double se_r = std::sqrt(std::max(0.0, var_r));
        double rho = std::pow(static_cast<double>(2 * N - 1) / static_cast<double>(ntilde),
                              static_cast<double>(k - 2));
        rep.normalizer = std::pow(rho * my, root);
        rep.norm = std::pow(std::max(0.0, r), root);
        if (r > 0) {
            rep.mc_stderr = se_r * root * std::pow(r, root - 1.0);
            rep.mc_lower99 = std::pow(std::max(0.0, r - kZ99 * se_r), root);
        } else {
            rep.mc_stderr = 0.0;
            rep.mc_lower99 = 0.0;
        }
        return rep;
    }

    double mean_f = method == Method::Direct ? detail::uk_mean_direct(padded, k).real()
                                             : detail::uk_mean_recursive(padded, k);
    double mean_ind = detail::indicator_mean_cached(k, N, ntilde, method);
    if (mean_ind <= 0) throw Error("indicator normalizer is not positive");
    rep.normalizer = std::pow(mean_ind, root);
    rep.norm = std::pow(std::max(0.0, mean_f) / mean_ind, root);
    if (f.disc_valued && rep.norm > 1.0 + 1e-9)
        throw Error("U^k norm of a disc-valued function exceeded 1");
    return rep;
}

// --- Gowers inner products and the Cauchy-Schwarz check -------------------------

// A corner-indexed family g_omega : Z/N~Z -> C, omega in {0,1}^k (bitmask order).
struct CornerFamily {
    int k = 2;
    std::vector<ComplexSeq> g;  // size 2^k, all cyclic with one modulus

    CornerFamily(int k_, std::vector<ComplexSeq> fams) : k(k_), g(std::move(fams)) {
        if (g.size() != (1u << k)) throw Error("corner family needs 2^k functions");
        for (const auto& s : g) {
            if (s.domain != ComplexSeq::Domain::Cyclic) throw Error("corner family must be cyclic");
            if (s.size() != g.front().size()) throw Error("corner family moduli differ");
        }
    }

    long long modulus() const { return g.front().size(); }
};

// <g_omega> = E_{x, h in G^k} prod_omega C^{|omega|} g_omega(x + omega.h).
inline std::complex<double> gowers_inner_product(const CornerFamily& fam) {
    const long long m = fam.modulus();
    const int k = fam.k;
    double cost = std::pow(static_cast<double>(m), k + 1) * static_cast<double>(1 << k);
    if (cost > 4e9) throw Error("Gowers inner product too large to enumerate");

    long long hcombos = 1;
    for (int i = 0; i < k; ++i) hcombos *= m;

    auto total = det_sum_complex(hcombos, [&](long long idx) {
        std::vector<long long> h(static_cast<std::size_t>(k));
        long long t = idx;
        for (int i = 0; i < k; ++i) {
            h[static_cast<std::size_t>(i)] = t % m;
            t /= m;
        }
        KahanComplex acc;
        for (long long x = 0; x < m; ++x) {
            std::complex<double> prod(1.0, 0.0);
            for (unsigned w = 0; w < (1u << k); ++w) {
                long long y = x;
                for (int i = 0; i < k; ++i)
                    if (w & (1u << i)) y += h[static_cast<std::size_t>(i)];
                std::complex<double> v = fam.g[w].at_cyclic(y);
                if (std::popcount(w) & 1) v = std::conj(v);
                prod *= v;
            }
            acc.add(prod);
        }
        return acc.value();
    });
    return total / (static_cast<double>(hcombos) * static_cast<double>(m));
}

struct GcsReport {
    double lhs = 0.0;  // |<g_omega>|
    double rhs = 0.0;  // prod ||g_omega||_{U^k}
    bool holds = false;
};

inline GcsReport gcs_check(const CornerFamily& fam) {
    GcsReport rep;
    rep.lhs = std::abs(gowers_inner_product(fam));
    rep.rhs = 1.0;
    for (const auto& g : fam.g)
        rep.rhs *= gowers_norm_group(g, fam.k, Method::Recursive).norm;
    rep.holds = rep.lhs <= rep.rhs + 1e-9;
    return rep;
}

// --- masked correlation and box counting ------------------------------------------

struct MaskedCorrelationOptions {
    unsigned long long max_ops = 400000000ULL;
    bool allow_mc = false;
    long long samples = 200000;
    std::uint64_t seed = 1;
};

struct MaskedCorrelationResult {
    double value = 0.0;  // |E ...|
    bool exact = true;
    std::optional<double> mc_stderr;
    unsigned long long terms = 0;  // qualifying tuples (exact mode)
};

// |E_{n in [N], h in [-N,N]^k} e(Delta_{h} phi(n)) prod_{omega != 0} 1_B(n + omega.h)|.
// Tuples with any omega != 0 corner outside B contribute zero, so the exact
// path enumerates (n, b_1..b_k) in [N] x B^k with h_i = b_i - n and checks the
// remaining corners.
inline MaskedCorrelationResult masked_correlation(const RealSeq<double>& phi,
                                                  const std::vector<long long>& B, int k,
                                                  long long N,
                                                  const MaskedCorrelationOptions& opt = {}) {
    if (phi.lo != 1 || phi.hi() < N) throw Error("phi must be defined on [1, N]");
    if (k < 1 || k > 4) throw Error("masked_correlation supports 1 <= k <= 4");
    std::vector<char> mask(static_cast<std::size_t>(N + 1), 0);
    for (long long b : B) {
        if (b < 1 || b > N) throw Error("B must be a subset of [1, N]");
        mask[static_cast<std::size_t>(b)] = 1;
    }
    std::vector<long long> blist;
    for (long long n = 1; n <= N; ++n)
        if (mask[static_cast<std::size_t>(n)]) blist.push_back(n);

    double denom = static_cast<double>(N);
    for (int i = 0; i < k; ++i) denom *= static_cast<double>(2 * N + 1);

    MaskedCorrelationResult res;
    if (blist.empty()) return res;

    double work = static_cast<double>(N) * std::pow(static_cast<double>(blist.size()), k);
    if (work > static_cast<double>(opt.max_ops)) {
        if (!opt.allow_mc) throw Error("masked_correlation budget exceeded; monte-carlo not permitted");
        // Monte Carlo over the full (n, h) box.
        std::mt19937_64 rng(opt.seed);
        std::uniform_int_distribution<long long> dn(1, N), dh(-N, N);
        KahanComplex acc;
        double sum_re2 = 0, sum_im2 = 0;
        for (long long s = 0; s < opt.samples; ++s) {
            long long n = dn(rng);
            std::vector<long long> h(static_cast<std::size_t>(k));
            for (auto& x : h) x = dh(rng);
            bool ok = true;
            for (unsigned w = 1; ok && w < (1u << k); ++w) {
                long long y = n;
                for (int i = 0; i < k; ++i)
                    if (w & (1u << i)) y += h[static_cast<std::size_t>(i)];
                if (y < 1 || y > N || !mask[static_cast<std::size_t>(y)]) ok = false;
            }
            std::complex<double> term(0.0, 0.0);
            if (ok) {
                double d = 0.0;
                for (unsigned w = 0; w < (1u << k); ++w) {
                    long long y = n;
                    for (int i = 0; i < k; ++i)
                        if (w & (1u << i)) y += h[static_cast<std::size_t>(i)];
                    double sign = ((k - std::popcount(w)) & 1) ? -1.0 : 1.0;
                    d += sign * phi.at(y);
                }
                term = e_of(d);
            }
            acc.add(term);
            sum_re2 += term.real() * term.real();
            sum_im2 += term.imag() * term.imag();
        }
        double s = static_cast<double>(opt.samples);
        std::complex<double> mean = acc.value() / s;
        res.value = std::abs(mean);
        res.exact = false;
        double var_re = std::max(0.0, sum_re2 / s - mean.real() * mean.real());
        double var_im = std::max(0.0, sum_im2 / s - mean.imag() * mean.imag());
        res.mc_stderr = std::sqrt((var_re + var_im) / s);
        return res;
    }

    std::atomic<unsigned long long> counted{0};
    auto total = det_sum_complex(N, [&](long long n0) {
        long long n = n0 + 1;
        KahanComplex acc;
        std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
        std::vector<long long> b(static_cast<std::size_t>(k));
        unsigned long long local = 0;
        for (;;) {
            for (int i = 0; i < k; ++i) b[static_cast<std::size_t>(i)] = blist[idx[static_cast<std::size_t>(i)]];
            bool ok = true;
            for (unsigned w = 1; ok && w < (1u << k); ++w) {
                if (std::popcount(w) == 1) continue;  // guaranteed by construction
                long long y = n;
                for (int i = 0; i < k; ++i)
                    if (w & (1u << i)) y += b[static_cast<std::size_t>(i)] - n;
                if (y < 1 || y > N || !mask[static_cast<std::size_t>(y)]) ok = false;
            }
            if (ok) {
                double d = 0.0;
                for (unsigned w = 0; w < (1u << k); ++w) {
                    long long y = n;
                    for (int i = 0; i < k; ++i)
                        if (w & (1u << i)) y += b[static_cast<std::size_t>(i)] - n;
                    double sign = ((k - std::popcount(w)) & 1) ? -1.0 : 1.0;
                    d += sign * phi.at(y);
                }
                acc.add(e_of(d));
                ++local;
            }
            int pos = k - 1;
            while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == blist.size()) {
                idx[static_cast<std::size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) break;
        }
        counted.fetch_add(local, std::memory_order_relaxed);
        return acc.value();
    });
    res.terms = counted.load();
    res.value = std::abs(total) / denom;
    res.exact = true;
    return res;
}

// |B_j| = #{(n, h) in [N] x [-N,N]^j : n + omega.h in B for all omega in {0,1}^j},
// exact, for j <= 3.
inline unsigned long long box_count(const std::vector<long long>& B, int j, long long N,
                                    long long max_n = 4096) {
    if (j < 0 || j > 3) throw Error("box_count supports 0 <= j <= 3");
    if (N > max_n) throw Error("box_count budget exceeded");
    std::vector<char> mask(static_cast<std::size_t>(N + 1), 0);
    std::vector<long long> blist;
    for (long long b : B) {
        if (b < 1 || b > N) throw Error("B must be a subset of [1, N]");
        if (!mask[static_cast<std::size_t>(b)]) blist.push_back(b);
        mask[static_cast<std::size_t>(b)] = 1;
    }
    auto in = [&](long long v) { return v >= 1 && v <= N && mask[static_cast<std::size_t>(v)]; };
    if (j == 0) return blist.size();
    unsigned long long count = 0;
    if (j == 1) {
        return static_cast<unsigned long long>(blist.size()) *
               static_cast<unsigned long long>(blist.size());
    }
    if (j == 2) {
        for (long long n : blist)
            for (long long b1 : blist)
                for (long long b2 : blist)
                    if (in(b1 + b2 - n)) ++count;
        return count;
    }
    for (long long n : blist)
        for (long long b1 : blist)
            for (long long b2 : blist) {
                if (!in(b1 + b2 - n)) continue;
                for (long long b3 : blist)
                    if (in(b1 + b3 - n) && in(b2 + b3 - n) && in(b1 + b2 + b3 - 2 * n)) ++count;
            }
    return count;
}

}  // namespace bracketlab
