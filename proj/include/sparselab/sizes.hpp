#pragma once

#include <optional>
#include <vector>

#include "sparselab/packets.hpp"
#include "sparselab/tiles.hpp"

namespace sparselab {

enum class TreeKind { overlapping, lacunary, mixed };

/// Subcollection of a multi-tile collection gathered under a top datum.
/// Members satisfy P_j <~ P_{T,j} in the tree component; kind classifies the
/// order relation actually attained per component.
struct Tree {
    DyadicInterval top_space;
    std::vector<DyadicInterval> top_freqs;
    std::vector<std::size_t> members; // indices into the source collection
    std::vector<TreeKind> kind_per_component;

    Tile top_component(std::size_t j) const { return Tile{top_space, top_freqs[j]}; }
};

/// Classify component j of the candidate tree tile-by-tile.
TreeKind classify_component(const MultiTileCollection& coll, const Tree& tree, std::size_t j);

/// Witness of a size supremum: either a plain tile or a tree.
struct SizeReport {
    double value = 0.0;
    std::optional<std::size_t> witness_index; // tile index when the sup is over tiles
    std::optional<Tree> witness_tree;         // tree when the sup ranges over trees
};

/// sup over P in the collection (restricted to `subset` when given) of
/// lp_average(f, I_P, p, M). Throws EmptyCollection.
SizeReport size_lp(const GridFunction& f, const MultiTileCollection& coll, double p, int M,
                   const std::vector<std::size_t>* subset = nullptr);

/// Same supremum over a localized plus-collection: P(I0) together with the
/// adjoined top.
SizeReport size_lp_plus(const GridFunction& f, const MultiTileCollection& coll,
                        const LocalizedCollection& local, double p, int M);

/// Tree square-function size ((1/|I_T|) sum_{P in T} |<f, phi_P^j>|^2)^{1/2}.
/// The tree must be j-lacunary or a single tile; throws NotLacunary.
double tree_size(const GridFunction& f, const MultiTileCollection& coll, const Tree& T,
                 std::size_t j, PacketProvider& packets);

/// sup of tree_size over all maximal j-lacunary trees with tops drawn from
/// the collection's own tiles (plus optional extra tops) and over all
/// singletons. Exhaustive; fine at desk scale.
SizeReport size_collection_tree(const GridFunction& f, const MultiTileCollection& coll,
                                std::size_t j, PacketProvider& packets,
                                const std::vector<std::size_t>* subset = nullptr,
                                const std::vector<MultiTile>* extra_tops = nullptr);

enum class RankMode { rank1, rank0 };

struct TreeDecomposition {
    std::vector<std::size_t> remainder; // P'
    std::vector<Tree> trees;            // extracted trees, disjoint tile sets
    double remainder_size = 0.0;        // re-checked post hoc
    double sum_tops = 0.0;              // sum |I_T|
    double packing_ratio = 0.0;         // sum|I_T| / (lambda^-2 ||f||_2^2) or (lambda^-1 ||f||_1)
};

/// Greedy tree extraction: while some candidate top carries a j-lacunary tree
/// (or a singleton coefficient) of size above lambda/2, extract the full
/// j-tree under the winning top (lacunary members plus overlapping
/// companions). Winners follow the fixed order: highest frequency cell of the
/// top's j component, then leftmost, then largest spatial interval.
/// Precondition: size_collection_tree(f, coll, j) <= lambda, else
/// PreconditionSizeExceeded. rank_mode selects the packing normalization
/// reported: lambda^-2 ||f||_2^2 for rank1, lambda^-1 ||f||_1 for rank0.
TreeDecomposition tree_decompose(const GridFunction& f, const MultiTileCollection& coll,
                                 std::size_t j, double lambda, PacketProvider& packets,
                                 RankMode rank_mode);

/// || f * chi~_{I0}^M ||_2 — the localized energy.
double energy_local(const GridFunction& f, const DyadicInterval& I0, int M = 1);

/// size^theta * energy^(1-theta) over the localized collection.
double mock_norm(const GridFunction& f, const MultiTileCollection& coll, std::size_t j,
                 double theta, PacketProvider& packets, const DyadicInterval& I0, int M = 1);

/// Per-sample linearizing frequency N(x) for the Carleson model.
struct LinearizingData {
    std::vector<double> freq; // N(x_i) per sample
};

/// size*: sup over P in the collection and admissible super-tiles P' >= P
/// (dyadic ancestors I' of I_P inside the dyadic cover of 9 I_P, frequency
/// cells w' of length 1/|I'| inside w_P) of the weighted average of |g| over
/// I'. When N is given the average carries the mask 1_{N(x) in w'}.
SizeReport carleson_size_star(const GridFunction& g, const MultiTileCollection& coll, int M,
                              const LinearizingData* N = nullptr);

} // namespace sparselab
