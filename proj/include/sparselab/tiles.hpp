#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sparselab/dyadic.hpp"

namespace sparselab {

/// Area-one space x frequency rectangle: scale(space) + scale(freq) == 0.
struct Tile {
    DyadicInterval space;
    DyadicInterval freq;

    bool area_one() const { return space.scale + freq.scale == 0; }
    friend bool operator==(const Tile&, const Tile&) = default;
    friend auto operator<=>(const Tile&, const Tile&) = default;
};

/// n+1 frequency intervals over one spatial interval; every component tile
/// is area one.
struct MultiTile {
    DyadicInterval space;
    std::vector<DyadicInterval> freqs;

    std::size_t components() const { return freqs.size(); }
    Tile component(std::size_t j) const { return Tile{space, freqs[j]}; }
    bool well_formed() const {
        if (freqs.empty()) return false;
        for (const auto& w : freqs)
            if (space.scale + w.scale != 0) return false;
        return true;
    }
    friend bool operator==(const MultiTile&, const MultiTile&) = default;
};

using MultiTileCollection = std::vector<MultiTile>;

// ---------------------------------------------------------------------------
// Order relations on tiles (exact integer arithmetic on the dilates 3w, 100w).
//   P' <  P   iff I_{P'} strictly inside I_P and w_P inside 3 w_{P'}
//   P' <= P   iff P' < P or P' = P
//   P' <~ P   iff I_{P'} inside I_P and w_P inside 100 w_{P'}
//   P' <~' P  iff P' <~ P but not P' <= P
// ---------------------------------------------------------------------------
bool tile_lt(const Tile& a, const Tile& b);
bool tile_leq(const Tile& a, const Tile& b);
bool tile_lesssim(const Tile& a, const Tile& b);
bool tile_lesssim_prime(const Tile& a, const Tile& b);

/// Is the dyadic interval w contained in the concentric dilate c*w0?
/// The dilate endpoints (2n+1 -+ c) 2^{k-1} stay on the half-lattice, so the
/// test is exact integer arithmetic for any positive integer c.
bool freq_in_dilate(const DyadicInterval& w, const DyadicInterval& w0, int c);

enum class TileRelation { none, lesssimPrime, lesssim, leq, lt };

/// Strongest relation of a against b. lt implies leq implies lesssim; a plain
/// lesssim verdict never wins because any such pair is leq or lesssimPrime.
TileRelation tile_order(const Tile& a, const Tile& b);
std::string to_string(TileRelation r);

// ---------------------------------------------------------------------------
// Localized collections P(I0) and P(I0)^+.
// ---------------------------------------------------------------------------
struct LocalizedCollection {
    std::vector<std::size_t> inside; // indices into the source collection with I_P inside I0
    MultiTile top;                   // adjoined top multi-tile with spatial interval I0
};

/// P(I0) = {P : I_P inside I0}; the plus-collection adjoins `top` when given,
/// otherwise a default multi-tile with spatial interval I0 and consecutive
/// frequency cells. `components` sets the default top's arity.
LocalizedCollection localize(const MultiTileCollection& coll, const DyadicInterval& I0,
                             const std::optional<MultiTile>& top = std::nullopt,
                             std::size_t components = 3);

// ---------------------------------------------------------------------------
// Rank-k validation.
// ---------------------------------------------------------------------------
struct RankViolation {
    std::size_t first = 0;   // indices of the offending ordered pair
    std::size_t second = 0;
    int bullet = 0;          // 1, 2 or 3
    std::vector<int> tuple;  // the k-tuple of components that triggered it
    std::string message;
};

struct RankReport {
    bool valid = true;
    std::optional<RankViolation> violation;
};

/// Exhaustive check of the rank-k conditions over all ordered pairs.
/// Bullet one: k equal frequency components force all components equal.
/// Bullet two: k overlapping components force all components to overlap in
/// the 100-dilate sense. Bullet three: when additionally |I_{P'}| is smaller
/// than |I_P| by the factor 2^scale_gap, at least two components must be
/// lesssim-prime. For k = 0 the tiles must be characterized by their spatial
/// interval: equal spatial intervals force identical frequency data, and the
/// frequency data may depend on the scale only.
RankReport validate_rank(const MultiTileCollection& coll, int k, int scale_gap = 4);

// ---------------------------------------------------------------------------
// Tile-family file: JSON lines, one multi-tile per line,
//   {"space":{"k":..,"n":..},"freqs":[{"k":..,"n":..},...]}
// The structural validator (area one, nonempty) runs on load.
// ---------------------------------------------------------------------------
void save_tile_family(const MultiTileCollection& coll, const std::string& path);
MultiTileCollection load_tile_family(const std::string& path);

} // namespace sparselab
