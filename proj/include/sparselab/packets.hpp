#pragma once

#include <map>
#include <vector>

#include "sparselab/fft.hpp"
#include "sparselab/grid.hpp"
#include "sparselab/tiles.hpp"

namespace sparselab {

/// Smooth nonnegative even profile supported exactly in the central
/// `support_fraction` of the unit frequency cell, C^smoothness at the support
/// boundary (polynomial taper (1-t^2)^(smoothness+1)).
struct BumpProfile {
    double support_fraction = 0.9;
    int smoothness = 8;

    /// u is the relative cell coordinate in [-1/2, 1/2); zero outside the
    /// central support_fraction.
    double eval(double u) const;
    /// Sampled profile over `count` equispaced cell coordinates.
    std::vector<double> sample(std::size_t count) const;
};

BumpProfile build_bump(double support_fraction, int smoothness);

struct GridSpec {
    double origin = 0.0;
    double step = 1.0 / 64.0;
    std::size_t count = 1 << 10;

    double length() const { return step * static_cast<double>(count); }
    GridFunction zeros() const { return GridFunction::zeros(origin, step, count); }
    GridSpec refined() const { return GridSpec{origin, step * 0.5, count * 2}; }
};

/// L2-normalized wave packet built in frequency: the DFT of the samples is
/// exactly supported inside the central support_fraction of w_P, and the
/// spatial decay is what gets measured afterwards.
struct WavePacket {
    Tile tile;
    GridFunction samples;
    // measured adaptation constants: row k, column m holds C_{k, m}
    std::vector<std::vector<double>> adaptation;
};

/// Throws GridTooCoarse if the grid does not resolve |I_P|, the frequency
/// cell, or if the cell leaves the representable band.
WavePacket wave_packet(const Tile& tile, const BumpProfile& profile, const GridSpec& grid);

/// Measured C_{k,m} = sup_x |phi^(k)(x)| |I|^{1/2+k} (1+dist(x,I)/|I|)^{m}
/// for k <= kmax (finite differences) and m <= mmax. Requires
/// kmax <= smoothness - 1 of the profile the packet was built with.
std::vector<std::vector<double>> verify_adaptation(const WavePacket& wp, int kmax, int mmax);

/// Step-weighted conjugate-linear inner product <f, phi> with pairwise
/// summation; throws GridMismatch when the grids differ.
cplx pair_inner(const GridFunction& f, const WavePacket& wp);
cplx pair_inner(const GridFunction& f, const GridFunction& g);

/// Packet cache keyed by tile; built single-writer, then read-shared.
class PacketProvider {
public:
    PacketProvider(BumpProfile profile, GridSpec grid)
        : profile_(profile), grid_(grid) {}

    const WavePacket& get(const Tile& tile);
    const WavePacket& get(const MultiTile& P, std::size_t component);
    /// Precompute every component packet of the collection.
    void build_all(const MultiTileCollection& coll);

    const GridSpec& grid() const { return grid_; }
    const BumpProfile& profile() const { return profile_; }

private:
    BumpProfile profile_;
    GridSpec grid_;
    std::map<std::pair<DyadicInterval, DyadicInterval>, WavePacket> cache_;
};

/// Rank-1 tri-tile family over nScales spatial scales. At spatial scale
/// 2^{-s} the three frequency cells of length 2^s sit at indices
/// (b, b+1, -2b-2) with b = base_index, so the other two are affine in the
/// first and xi1+xi2+xi3 = 0 is resolvable inside the cells. Spatial
/// translations are spread across the grid. Throws CapacityExceeded when the
/// frequencies leave the grid band or a cell holds fewer than four DFT bins.
MultiTileCollection generate_rank1_family(int n_scales, int translations_per_scale,
                                          const GridSpec& grid, long long base_index = 1);

/// Rank-0 family: one multi-tile per spatial interval, frequency cells a
/// function of the scale alone. Component 0 is the overlapping
/// (low-frequency) cell at index 0, the remaining components the lacunary
/// cell at index 1.
MultiTileCollection generate_rank0_family(int n_scales, int translations_per_scale,
                                          const GridSpec& grid, std::size_t components = 3);

/// Bi-tiles for the Carleson model: spatial dyadic intervals crossed with
/// adjacent frequency cell pairs (w_left, w_right) inside [-freq_band, freq_band).
MultiTileCollection generate_bitile_family(int n_scales, int translations_per_scale,
                                           const GridSpec& grid, long long freq_band = 8);

} // namespace sparselab
