// Deterministic data-parallel reduction.
//
// Work is split into a fixed number of chunks that does not depend on the
// thread count; each chunk is accumulated with compensated (Kahan) summation
// and the chunk partials are combined serially in index order.  Serial and
// parallel runs therefore produce bit-identical sums.  BRACKETLAB_THREADS
// caps the worker count.

#pragma once

#include <atomic>
#include <complex>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace bracketlab {

inline int thread_budget() {
    if (const char* env = std::getenv("BRACKETLAB_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

struct KahanComplex {
    KahanSum re, im;
    void add(const std::complex<double>& z) {
        re.add(z.real());
        im.add(z.imag());
    }
    std::complex<double> value() const { return {re.sum, im.sum}; }
};

namespace detail {

inline constexpr long long kChunks = 64;

template <class ChunkFn>
void run_chunked(long long n, ChunkFn per_chunk) {
    if (n <= 0) return;
    const long long chunks = std::min<long long>(kChunks, n);
    const long long step = (n + chunks - 1) / chunks;
    int workers = std::min<long long>(thread_budget(), chunks);
    if (workers <= 1) {
        for (long long c = 0; c < chunks; ++c)
            per_chunk(c, c * step, std::min(n, (c + 1) * step));
        return;
    }
    std::atomic<long long> next{0};
    auto body = [&] {
        for (;;) {
            long long c = next.fetch_add(1);
            if (c >= chunks) return;
            per_chunk(c, c * step, std::min(n, (c + 1) * step));
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers) - 1);
    for (int i = 1; i < workers; ++i) pool.emplace_back(body);
    body();
    for (auto& t : pool) t.join();
}

}  // namespace detail

// Sum of f(i) for i in [0, n) with a fixed reduction order.
template <class F>
double det_sum(long long n, F f) {
    const long long chunks = std::min<long long>(detail::kChunks, std::max<long long>(n, 1));
    std::vector<double> partial(static_cast<std::size_t>(chunks), 0.0);
    detail::run_chunked(n, [&](long long c, long long lo, long long hi) {
        KahanSum acc;
        for (long long i = lo; i < hi; ++i) acc.add(f(i));
        partial[static_cast<std::size_t>(c)] = acc.sum;
    });
    KahanSum total;
    for (double p : partial) total.add(p);
    return total.sum;
}

template <class F>
std::complex<double> det_sum_complex(long long n, F f) {
    const long long chunks = std::min<long long>(detail::kChunks, std::max<long long>(n, 1));
    std::vector<std::complex<double>> partial(static_cast<std::size_t>(chunks), {0.0, 0.0});
    detail::run_chunked(n, [&](long long c, long long lo, long long hi) {
        KahanComplex acc;
        for (long long i = lo; i < hi; ++i) acc.add(f(i));
        partial[static_cast<std::size_t>(c)] = acc.value();
    });
    KahanComplex total;
    for (const auto& p : partial) total.add(p);
    return total.value();
}

}  // namespace bracketlab
