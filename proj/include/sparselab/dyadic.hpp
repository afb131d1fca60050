#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "sparselab/numeric.hpp"

namespace sparselab {

/// Half-open dyadic interval [n*2^k, (n+1)*2^k). All navigation and
/// containment queries are exact integer arithmetic; floating endpoints are
/// derived views only.
struct DyadicInterval {
    int scale = 0;       // k: length is 2^k
    long long index = 0; // n

    double lower() const { return std::ldexp(static_cast<double>(index), scale); }
    double upper() const { return std::ldexp(static_cast<double>(index + 1), scale); }
    double length() const { return std::ldexp(1.0, scale); }
    Dyadic2 exact_length() const { return Dyadic2::pow2(scale); }

    DyadicInterval parent() const {
        // floor division keeps negative indices on the dyadic lattice
        return {scale + 1, index >= 0 ? index / 2 : (index - 1) / 2};
    }
    DyadicInterval left_child() const { return {scale - 1, 2 * index}; }
    DyadicInterval right_child() const { return {scale - 1, 2 * index + 1}; }
    DyadicInterval sibling() const {
        return {scale, (index % 2 == 0) ? index + 1 : index - 1};
    }

    bool contains_point(double x) const { return x >= lower() && x < upper(); }

    /// J <= this as sets; exact.
    bool contains(const DyadicInterval& j) const {
        if (j.scale > scale) return false;
        long long idx = j.index;
        for (int s = j.scale; s < scale; ++s) idx = (idx >= 0) ? idx / 2 : (idx - 1) / 2;
        return idx == index;
    }
    bool strictly_contains(const DyadicInterval& j) const {
        return contains(j) && !(scale == j.scale && index == j.index);
    }
    bool disjoint(const DyadicInterval& j) const {
        return !contains(j) && !j.contains(*this);
    }

    /// dist(x, I) in length units; 0 on the closed hull of I.
    double dist(double x) const {
        const double lo = lower(), hi = upper();
        if (x < lo) return lo - x;
        if (x > hi) return x - hi;
        return 0.0;
    }

    friend bool operator==(const DyadicInterval& a, const DyadicInterval& b) {
        return a.scale == b.scale && a.index == b.index;
    }
    friend auto operator<=>(const DyadicInterval& a, const DyadicInterval& b) = default;

    std::string str() const;
};

/// Smallest dyadic interval containing [lo, hi); endpoints are exact dyadics
/// represented as m * 2^e.
DyadicInterval dyadic_hull(const Dyadic2& lo, const Dyadic2& hi);

/// chi~_I(x)^M = (1 + dist(x,I)/|I|)^(-100*M). The base decay exponent is
/// fixed at 100; M is the only knob.
struct AdaptedWeightSpec {
    int decay_power = 1; // M
    static constexpr int kBaseExponent = 100;
};

/// Value of chi~_I^M at x; always in (0, 1], equal to 1 on I.
double adapted_weight_eval(const DyadicInterval& I, int M, double x);

/// Dyadic subintervals of `root` with scales in [min_scale, root.scale],
/// ordered coarse to fine, left to right.
std::vector<DyadicInterval> dyadic_subintervals(const DyadicInterval& root, int min_scale);

} // namespace sparselab
