#include "sparselab/fft.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace sparselab {

void fft_radix2(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0 || !std::has_single_bit(n)) throw BadConfig("fft: size must be a power of two");
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cplx u = a[i + j];
                const cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (cplx& z : a) z *= inv;
    }
}

Spectrum analyze(const GridFunction& f) {
    const std::size_t n = f.size();
    std::vector<cplx> a = f.samples();
    fft_radix2(a, false);
    // a[k] = sum_i f_i e^{-2 pi i ik/N}. With x_i = x0 + i h and xi_m = m/(N h):
    // F_m = (1/N) a[k(m)] e^{-2 pi i xi_m x0}, where k(m) = m mod N.
    Spectrum s;
    const double L = f.grid_length();
    s.freq_step = 1.0 / L;
    s.coeff.resize(n);
    const double invn = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const long long m = static_cast<long long>(i) - static_cast<long long>(n / 2);
        const std::size_t k = static_cast<std::size_t>((m % static_cast<long long>(n) + static_cast<long long>(n)) % static_cast<long long>(n));
        const double xi = s.freq_step * static_cast<double>(m);
        const double ph = -2.0 * std::numbers::pi * xi * f.origin();
        s.coeff[i] = a[k] * invn * cplx(std::cos(ph), std::sin(ph));
    }
    return s;
}

GridFunction synthesize(const Spectrum& s, double origin, double step) {
    const std::size_t n = s.coeff.size();
    // b[k(m)] = F_m e^{2 pi i xi_m x0}; samples = N * IFFT(b).
    std::vector<cplx> b(n, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) {
        const long long m = static_cast<long long>(i) - static_cast<long long>(n / 2);
        const std::size_t k = static_cast<std::size_t>((m % static_cast<long long>(n) + static_cast<long long>(n)) % static_cast<long long>(n));
        const double xi = s.freq_step * static_cast<double>(m);
        const double ph = 2.0 * std::numbers::pi * xi * origin;
        b[k] = s.coeff[i] * cplx(std::cos(ph), std::sin(ph));
    }
    fft_radix2(b, true);
    for (cplx& z : b) z *= static_cast<double>(n);
    return GridFunction(origin, step, std::move(b));
}

} // namespace sparselab
