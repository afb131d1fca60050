#include "sparselab/dyadic.hpp"

#include <cmath>
#include <sstream>

#include "sparselab/errors.hpp"

namespace sparselab {

std::string DyadicInterval::str() const {
    std::ostringstream os;
    os << "[" << lower() << "," << upper() << ")@2^" << scale;
    return os.str();
}

namespace {
long long floor_div_pow2(long long n, int shift) {
    if (shift <= 0) return n << (-shift);
    long long q = n >> shift;
    return q;
}
} // namespace

DyadicInterval dyadic_hull(const Dyadic2& lo, const Dyadic2& hi) {
    // Bring both endpoints to a common fine lattice, then walk up scales
    // until lo and hi-1 land in the same cell.
    const Dyadic2 l = lo.normalized(), h = hi.normalized();
    const int e = std::min(l.exp, h.exp);
    const long long nl = l.num << (l.exp - e);
    const long long nh = (h.num << (h.exp - e)) - 1; // last fine cell strictly below hi
    for (int k = e; k <= 62 && k - e < 62; ++k) {
        const long long a = floor_div_pow2(nl, k - e);
        const long long b = floor_div_pow2(nh, k - e);
        if (a == b) return {k, a};
    }
    // intervals straddling zero have no dyadic hull
    throw BadConfig("dyadic_hull: no dyadic interval contains the range");
}

double adapted_weight_eval(const DyadicInterval& I, int M, double x) {
    const double t = 1.0 + I.dist(x) / I.length();
    return std::pow(t, -100.0 * static_cast<double>(M));
}

std::vector<DyadicInterval> dyadic_subintervals(const DyadicInterval& root, int min_scale) {
    std::vector<DyadicInterval> out;
    for (int s = root.scale; s >= min_scale; --s) {
        const long long count = 1LL << (root.scale - s);
        const long long base = root.index << (root.scale - s);
        for (long long i = 0; i < count; ++i) out.push_back({s, base + i});
    }
    return out;
}

} // namespace sparselab
