#include "sparselab/packets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sparselab/errors.hpp"

namespace sparselab {

double BumpProfile::eval(double u) const {
    const double half = 0.5 * support_fraction;
    if (u <= -half || u >= half) return 0.0;
    const double t = u / half;
    const double base = 1.0 - t * t;
    double v = 1.0;
    for (int i = 0; i < smoothness + 1; ++i) v *= base;
    return v;
}

std::vector<double> BumpProfile::sample(std::size_t count) const {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double u = -0.5 + (static_cast<double>(i) + 0.5) / static_cast<double>(count);
        out[i] = eval(u);
    }
    return out;
}

BumpProfile build_bump(double support_fraction, int smoothness) {
    if (!(support_fraction > 0.0 && support_fraction < 1.0))
        throw BadConfig("build_bump: support fraction must lie in (0,1)");
    if (smoothness < 1) throw BadConfig("build_bump: smoothness must be >= 1");
    return BumpProfile{support_fraction, smoothness};
}

WavePacket wave_packet(const Tile& tile, const BumpProfile& profile, const GridSpec& grid) {
    if (!tile.area_one()) throw BadConfig("wave_packet: tile is not area one");
    const double L = grid.length();
    if (grid.step > tile.space.length()) throw GridTooCoarse("grid step exceeds |I_P|");

    // Frequency bins xi_m = m / L, m in [-N/2, N/2). Populate the bins inside
    // the central support fraction of w_P with profile values and the phase
    // centering the packet on I_P.
    const std::size_t n = grid.count;
    Spectrum s;
    s.freq_step = 1.0 / L;
    s.coeff.assign(n, cplx{0.0, 0.0});

    const double wlo = tile.freq.lower();
    const double wlen = tile.freq.length();
    const double wc = wlo + 0.5 * wlen;
    const double xc = tile.space.lower() + 0.5 * tile.space.length();

    const double nyq = 0.5 * static_cast<double>(n) / L;
    if (wc - 0.5 * wlen < -nyq || wc + 0.5 * wlen > nyq)
        throw GridTooCoarse("frequency cell outside the representable band");

    std::size_t populated = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = s.freq_of(i);
        const double u = (xi - wc) / wlen;
        const double a = profile.eval(u);
        if (a == 0.0) continue;
        const double ph = -2.0 * std::numbers::pi * xi * xc;
        s.coeff[i] = a * cplx(std::cos(ph), std::sin(ph));
        ++populated;
    }
    if (populated < 2) throw GridTooCoarse("frequency cell resolves fewer than two bins");

    GridFunction samples = synthesize(s, grid.origin, grid.step);
    const double nrm = samples.norm_l2();
    if (nrm == 0.0) throw GridTooCoarse("degenerate packet");
    samples *= 1.0 / nrm;
    return WavePacket{tile, std::move(samples), {}};
}

std::vector<std::vector<double>> verify_adaptation(const WavePacket& wp, int kmax, int mmax) {
    const GridFunction& phi = wp.samples;
    const double h = phi.step();
    const DyadicInterval& I = wp.tile.space;
    const double lenI = I.length();

    // derivative stacks by repeated central differences
    std::vector<std::vector<cplx>> deriv(static_cast<std::size_t>(kmax) + 1);
    deriv[0] = phi.samples();
    for (int k = 1; k <= kmax; ++k) {
        const auto& prev = deriv[static_cast<std::size_t>(k - 1)];
        std::vector<cplx> cur(prev.size(), cplx{0.0, 0.0});
        for (std::size_t i = 1; i + 1 < prev.size(); ++i)
            cur[i] = (prev[i + 1] - prev[i - 1]) / (2.0 * h);
        deriv[static_cast<std::size_t>(k)] = std::move(cur);
    }

    std::vector<std::vector<double>> table(static_cast<std::size_t>(kmax) + 1,
                                           std::vector<double>(static_cast<std::size_t>(mmax) + 1, 0.0));
    for (int k = 0; k <= kmax; ++k) {
        const double scale = std::pow(lenI, 0.5 + static_cast<double>(k));
        for (std::size_t i = 0; i < phi.size(); ++i) {
            const double mag = std::abs(deriv[static_cast<std::size_t>(k)][i]);
            if (mag == 0.0) continue;
            const double t = 1.0 + I.dist(phi.x(i)) / lenI;
            double w = 1.0;
            for (int m = 0; m <= mmax; ++m) {
                double& cell = table[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)];
                cell = std::max(cell, mag * scale * w);
                w *= t;
            }
        }
    }
    return table;
}

cplx pair_inner(const GridFunction& f, const GridFunction& g) {
    if (!f.same_grid(g)) throw GridMismatch();
    std::vector<cplx> terms(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) terms[i] = f[i] * std::conj(g[i]);
    return f.step() * pairwise_sum(terms);
}

cplx pair_inner(const GridFunction& f, const WavePacket& wp) {
    return pair_inner(f, wp.samples);
}

const WavePacket& PacketProvider::get(const Tile& tile) {
    const auto key = std::make_pair(tile.space, tile.freq);
    auto it = cache_.find(key);
    if (it == cache_.end())
        it = cache_.emplace(key, wave_packet(tile, profile_, grid_)).first;
    return it->second;
}

const WavePacket& PacketProvider::get(const MultiTile& P, std::size_t component) {
    if (component >= P.components()) throw MissingPacket("component out of range");
    return get(P.component(component));
}

void PacketProvider::build_all(const MultiTileCollection& coll) {
    for (const MultiTile& P : coll)
        for (std::size_t j = 0; j < P.components(); ++j) get(P, j);
}

namespace {
// Spread `want` spatial translations of length 2^{-s} across the grid.
std::vector<long long> spread_positions(const GridSpec& grid, int space_scale, int want) {
    const double L = grid.length();
    const long long slots = static_cast<long long>(std::floor(L / std::ldexp(1.0, space_scale)));
    if (slots <= 0) return {};
    const long long n = std::min<long long>(want, slots);
    std::vector<long long> pos;
    const long long base = static_cast<long long>(std::round(grid.origin / std::ldexp(1.0, space_scale)));
    for (long long i = 0; i < n; ++i) pos.push_back(base + i * (slots / n));
    return pos;
}
} // namespace

MultiTileCollection generate_rank1_family(int n_scales, int translations_per_scale,
                                          const GridSpec& grid, long long base_index) {
    if (n_scales < 1 || translations_per_scale < 1)
        throw BadConfig("generate_rank1_family: need at least one scale and translation");
    MultiTileCollection coll;
    const double nyq = 0.5 / grid.step;
    const double bins_per_unit = grid.length();
    for (int s = 0; s < n_scales; ++s) {
        const int kI = -s;       // |I| = 2^{-s}
        const int kw = s;        // |w| = 2^{s}
        const double wlen = std::ldexp(1.0, kw);
        const long long b = base_index;
        const long long idx[3] = {b, b + 1, -2 * b - 2};
        for (long long n : idx) {
            const double lo = static_cast<double>(n) * wlen;
            if (lo < -nyq || lo + wlen > nyq)
                throw CapacityExceeded("rank-1 family frequencies exceed the grid band");
        }
        if (wlen * bins_per_unit < 4.0)
            throw CapacityExceeded("frequency cells resolve fewer than four bins");
        if (grid.step > std::ldexp(1.0, kI))
            throw CapacityExceeded("spatial intervals below the grid step");
        for (long long t : spread_positions(grid, kI, translations_per_scale)) {
            MultiTile P;
            P.space = {kI, t};
            P.freqs = {{kw, idx[0]}, {kw, idx[1]}, {kw, idx[2]}};
            coll.push_back(std::move(P));
        }
    }
    return coll;
}

MultiTileCollection generate_rank0_family(int n_scales, int translations_per_scale,
                                          const GridSpec& grid, std::size_t components) {
    MultiTileCollection coll;
    const double nyq = 0.5 / grid.step;
    for (int s = 0; s < n_scales; ++s) {
        const int kI = -s;
        const int kw = s;
        if (2.0 * std::ldexp(1.0, kw) > nyq)
            throw CapacityExceeded("rank-0 family frequencies exceed the grid band");
        for (long long t : spread_positions(grid, kI, translations_per_scale)) {
            MultiTile P;
            P.space = {kI, t};
            P.freqs.push_back({kw, 0}); // overlapping component
            for (std::size_t j = 1; j < components; ++j)
                P.freqs.push_back({kw, 1}); // lacunary components
            coll.push_back(std::move(P));
        }
    }
    return coll;
}

MultiTileCollection generate_bitile_family(int n_scales, int translations_per_scale,
                                           const GridSpec& grid, long long freq_band) {
    MultiTileCollection coll;
    for (int s = 0; s < n_scales; ++s) {
        const int kI = -s;
        const int kw = s;
        const double wlen = std::ldexp(1.0, kw);
        // adjacent cell pairs (2u, 2u+1) with the parent inside the band
        const long long lim = std::max<long long>(1, static_cast<long long>(std::floor(static_cast<double>(freq_band) / (2.0 * wlen))));
        for (long long u = -lim; u < lim; ++u) {
            for (long long t : spread_positions(grid, kI, translations_per_scale)) {
                MultiTile P;
                P.space = {kI, t};
                P.freqs = {{kw, 2 * u}, {kw, 2 * u + 1}};
                coll.push_back(std::move(P));
            }
        }
    }
    return coll;
}

} // namespace sparselab
