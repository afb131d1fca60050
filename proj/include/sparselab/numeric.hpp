#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <thread>
#include <vector>

namespace sparselab {

using cplx = std::complex<double>;

/// Pairwise (tree) summation. The reduction order depends only on the length
/// of the range, so results are reproducible run to run and across any
/// parallel split of the callers.
template <typename T>
T pairwise_sum(std::span<const T> v) {
    if (v.size() <= 8) {
        T acc{};
        for (const T& x : v) acc += x;
        return acc;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T>& v) {
    return pairwise_sum(std::span<const T>(v));
}

/// Runs fn(i) for i in [0, n), split across threads. Each index must be
/// independent; any shared output slot may be written by exactly one index.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// ---------------------------------------------------------------------------
// Exact dyadic rationals: value = num * 2^exp with integer num, exp.
// Lengths and measures of dyadic intervals live here so that sparsity and
// Carleson constants are computed without rounding.
// ---------------------------------------------------------------------------
struct Dyadic2 {
    long long num = 0;
    int exp = 0;

    static Dyadic2 zero() { return {0, 0}; }
    static Dyadic2 pow2(int k) { return {1, k}; }

    double to_double() const { return std::ldexp(static_cast<double>(num), exp); }

    Dyadic2 normalized() const {
        Dyadic2 r = *this;
        if (r.num == 0) { r.exp = 0; return r; }
        while ((r.num & 1) == 0) { r.num >>= 1; ++r.exp; }
        return r;
    }

    friend Dyadic2 operator+(Dyadic2 a, Dyadic2 b) {
        if (a.num == 0) return b;
        if (b.num == 0) return a;
        const int e = std::min(a.exp, b.exp);
        return Dyadic2{(a.num << (a.exp - e)) + (b.num << (b.exp - e)), e}.normalized();
    }
    friend Dyadic2 operator*(Dyadic2 a, Dyadic2 b) {
        return Dyadic2{a.num * b.num, a.exp + b.exp}.normalized();
    }
    friend bool operator==(Dyadic2 a, Dyadic2 b) {
        a = a.normalized(); b = b.normalized();
        return a.num == b.num && (a.num == 0 || a.exp == b.exp);
    }
    friend bool operator<(Dyadic2 a, Dyadic2 b) {
        const int e = std::min(a.exp, b.exp);
        return (a.num << (a.exp - e)) < (b.num << (b.exp - e));
    }
    friend bool operator<=(Dyadic2 a, Dyadic2 b) { return a < b || a == b; }
};

// ---------------------------------------------------------------------------
// Small exact fractions for the alpha-tuple arithmetic and eta/Carleson
// ratios. Overflows are out of range at desk scale; normalize keeps terms
// reduced.
// ---------------------------------------------------------------------------
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d = 1) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den < 0) { num = -num; den = -den; }
        const long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend Rational operator+(Rational a, Rational b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
    friend Rational operator-(Rational a, Rational b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
    friend Rational operator*(Rational a, Rational b) { return {a.num * b.num, a.den * b.den}; }
    friend bool operator==(Rational a, Rational b) { return a.num == b.num && a.den == b.den; }
    friend bool operator!=(Rational a, Rational b) { return !(a == b); }
    friend bool operator<(Rational a, Rational b) { return a.num * b.den < b.num * a.den; }
};

/// |z|^q for the norms used in the acceptance gates. q in {1/2, 1, 2} goes
/// through sqrt / identity / square so that rescaling an argument by a power
/// of two rescales the result exactly.
inline double abs_pow(double a, double q) {
    a = std::fabs(a);
    if (q == 1.0) return a;
    if (q == 2.0) return a * a;
    if (q == 0.5) return std::sqrt(a);
    return std::pow(a, q);
}

inline double abs_pow(cplx z, double q) {
    const double s = z.real() * z.real() + z.imag() * z.imag();
    if (q == 2.0) return s;
    if (q == 1.0) return std::sqrt(s);
    if (q == 0.5) return std::sqrt(std::sqrt(s));
    return std::pow(s, 0.5 * q);
}

} // namespace sparselab
