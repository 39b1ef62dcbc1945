// Forward discrete Fourier transform with the e(-x*xi/N) kernel and no
// normalization.  Power-of-two sizes use an iterative radix-2 butterfly;
// anything else falls back to the quadratic direct sum (only small
// non-power-of-two groups appear in practice).

#pragma once

#include <complex>
#include <numbers>
#include <vector>

namespace bracketlab {

inline bool is_pow2(std::size_t n) { return n && (n & (n - 1)) == 0; }

inline void fft_pow2_inplace(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                std::complex<double> u = a[i + j];
                std::complex<double> v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

inline std::vector<std::complex<double>> dft_direct(
    const std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t x = 0; x < n; ++x) {
            const double ang = -2.0 * std::numbers::pi *
                               static_cast<double>(k * x % n) / static_cast<double>(n);
            acc += a[x] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

inline std::vector<std::complex<double>> forward_transform(
    std::vector<std::complex<double>> a) {
    if (is_pow2(a.size())) {
        fft_pow2_inplace(a);
        return a;
    }
    return dft_direct(a);
}

}  // namespace bracketlab
