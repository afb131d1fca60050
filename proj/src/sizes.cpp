#include "sparselab/sizes.hpp"

#include <algorithm>
#include <cmath>

#include "sparselab/errors.hpp"

namespace sparselab {

TreeKind classify_component(const MultiTileCollection& coll, const Tree& tree, std::size_t j) {
    bool all_leq = true, all_prime = true;
    for (std::size_t i : tree.members) {
        const Tile a = coll[i].component(j);
        const Tile b = tree.top_component(j);
        if (!tile_leq(a, b)) all_leq = false;
        if (!tile_lesssim_prime(a, b)) all_prime = false;
    }
    if (all_leq && !tree.members.empty()) return TreeKind::overlapping;
    if (all_prime && !tree.members.empty()) return TreeKind::lacunary;
    return TreeKind::mixed;
}

namespace {

std::vector<std::size_t> all_indices(const MultiTileCollection& coll) {
    std::vector<std::size_t> idx(coll.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    return idx;
}

double coeff_sq_sum(const GridFunction& f, const MultiTileCollection& coll,
                    const std::vector<std::size_t>& members, std::size_t j,
                    PacketProvider& packets) {
    std::vector<double> sq(members.size());
    for (std::size_t s = 0; s < members.size(); ++s)
        sq[s] = std::norm(pair_inner(f, packets.get(coll[members[s]], j)));
    return pairwise_sum(sq);
}

// Deterministic candidate-top order: highest frequency cell of the j
// component first, then leftmost spatial interval, then largest.
bool top_order_before(const MultiTile& a, const MultiTile& b, std::size_t j) {
    const Dyadic2 fa{a.freqs[j].index, a.freqs[j].scale};
    const Dyadic2 fb{b.freqs[j].index, b.freqs[j].scale};
    if (!(fa == fb)) return fb < fa; // higher frequency first
    const Dyadic2 sa{a.space.index, a.space.scale};
    const Dyadic2 sb{b.space.index, b.space.scale};
    if (!(sa == sb)) return sa < sb; // leftmost first
    return a.space.scale > b.space.scale; // largest first
}

} // namespace

SizeReport size_lp(const GridFunction& f, const MultiTileCollection& coll, double p, int M,
                   const std::vector<std::size_t>* subset) {
    const std::vector<std::size_t> idx = subset ? *subset : all_indices(coll);
    if (idx.empty()) throw EmptyCollection();
    SizeReport r;
    for (std::size_t i : idx) {
        const double v = lp_average(f, coll[i].space, p, M);
        if (!r.witness_index || v > r.value) {
            r.value = v;
            r.witness_index = i;
        }
    }
    return r;
}

SizeReport size_lp_plus(const GridFunction& f, const MultiTileCollection& coll,
                        const LocalizedCollection& local, double p, int M) {
    SizeReport r;
    r.value = lp_average(f, local.top.space, p, M);
    for (std::size_t i : local.inside) {
        const double v = lp_average(f, coll[i].space, p, M);
        if (v > r.value) {
            r.value = v;
            r.witness_index = i;
        }
    }
    return r;
}

double tree_size(const GridFunction& f, const MultiTileCollection& coll, const Tree& T,
                 std::size_t j, PacketProvider& packets) {
    if (T.members.empty()) return 0.0;
    if (T.members.size() > 1 && classify_component(coll, T, j) != TreeKind::lacunary)
        throw NotLacunary("tree is not j-lacunary");
    const double sq = coeff_sq_sum(f, coll, T.members, j, packets);
    return std::sqrt(sq / T.top_space.length());
}

SizeReport size_collection_tree(const GridFunction& f, const MultiTileCollection& coll,
                                std::size_t j, PacketProvider& packets,
                                const std::vector<std::size_t>* subset,
                                const std::vector<MultiTile>* extra_tops) {
    const std::vector<std::size_t> idx = subset ? *subset : all_indices(coll);
    if (idx.empty() && (!extra_tops || extra_tops->empty())) throw EmptyCollection();

    std::vector<MultiTile> tops;
    tops.reserve(idx.size());
    for (std::size_t i : idx) tops.push_back(coll[i]);
    if (extra_tops)
        for (const MultiTile& t : *extra_tops) tops.push_back(t);
    std::sort(tops.begin(), tops.end(),
              [j](const MultiTile& a, const MultiTile& b) { return top_order_before(a, b, j); });
    tops.erase(std::unique(tops.begin(), tops.end()), tops.end());

    SizeReport best;
    auto consider = [&](double v, Tree&& t) {
        if (!best.witness_tree || v > best.value) {
            best.value = v;
            best.witness_tree = std::move(t);
        }
    };

    // maximal j-lacunary tree under each candidate top
    for (const MultiTile& top : tops) {
        Tree t;
        t.top_space = top.space;
        t.top_freqs = top.freqs;
        for (std::size_t i : idx)
            if (tile_lesssim_prime(coll[i].component(j), Tile{top.space, top.freqs[j]}))
                t.members.push_back(i);
        if (t.members.empty()) continue;
        const double v = std::sqrt(coeff_sq_sum(f, coll, t.members, j, packets) / t.top_space.length());
        consider(v, std::move(t));
    }
    // singletons
    for (std::size_t i : idx) {
        const double v = std::abs(pair_inner(f, packets.get(coll[i], j))) /
                         std::sqrt(coll[i].space.length());
        Tree t;
        t.top_space = coll[i].space;
        t.top_freqs = coll[i].freqs;
        t.members = {i};
        consider(v, std::move(t));
    }
    if (best.witness_tree) {
        Tree& w = *best.witness_tree;
        for (std::size_t c = 0; c < w.top_freqs.size(); ++c)
            w.kind_per_component.push_back(classify_component(coll, w, c));
    }
    return best;
}

TreeDecomposition tree_decompose(const GridFunction& f, const MultiTileCollection& coll,
                                 std::size_t j, double lambda, PacketProvider& packets,
                                 RankMode rank_mode) {
    if (coll.empty()) throw EmptyCollection();
    {
        const double s0 = size_collection_tree(f, coll, j, packets).value;
        if (s0 > lambda * (1.0 + 1e-9)) throw PreconditionSizeExceeded();
    }

    std::vector<std::size_t> remaining = all_indices(coll);
    TreeDecomposition out;

    for (std::size_t guard = 0; guard <= coll.size(); ++guard) {
        // Qualifiers are tops whose lacunary tree or own coefficient exceeds
        // lambda/2 over the remaining stock; the winner is the first
        // qualifier in the fixed top order, not the largest.
        std::size_t winner = coll.size();
        for (std::size_t t : remaining) {
            const Tile topj = coll[t].component(j);
            std::vector<std::size_t> lac;
            for (std::size_t i : remaining)
                if (tile_lesssim_prime(coll[i].component(j), topj)) lac.push_back(i);
            double v = std::abs(pair_inner(f, packets.get(coll[t], j))) /
                       std::sqrt(coll[t].space.length());
            if (!lac.empty())
                v = std::max(v, std::sqrt(coeff_sq_sum(f, coll, lac, j, packets) /
                                          coll[t].space.length()));
            if (v > 0.5 * lambda &&
                (winner == coll.size() || top_order_before(coll[t], coll[winner], j)))
                winner = t;
        }
        if (winner == coll.size()) break;

        Tree tree;
        tree.top_space = coll[winner].space;
        tree.top_freqs = coll[winner].freqs;
        const Tile topj = coll[winner].component(j);
        std::vector<std::size_t> keep;
        for (std::size_t i : remaining) {
            if (tile_lesssim(coll[i].component(j), topj))
                tree.members.push_back(i);
            else
                keep.push_back(i);
        }
        for (std::size_t c = 0; c < tree.top_freqs.size(); ++c)
            tree.kind_per_component.push_back(classify_component(coll, tree, c));
        out.sum_tops += tree.top_space.length();
        out.trees.push_back(std::move(tree));
        remaining = std::move(keep);
        if (remaining.empty()) break;
    }

    out.remainder = remaining;
    out.remainder_size =
        remaining.empty() ? 0.0 : size_collection_tree(f, coll, j, packets, &remaining).value;
    if (rank_mode == RankMode::rank1) {
        const double l2 = f.norm_l2();
        out.packing_ratio = l2 > 0.0 ? out.sum_tops * lambda * lambda / (l2 * l2) : 0.0;
    } else {
        const double l1 = f.norm_l1();
        out.packing_ratio = l1 > 0.0 ? out.sum_tops * lambda / l1 : 0.0;
    }
    return out;
}

double energy_local(const GridFunction& f, const DyadicInterval& I0, int M) {
    return weighted_l2_norm(f, I0, M);
}

double mock_norm(const GridFunction& f, const MultiTileCollection& coll, std::size_t j,
                 double theta, PacketProvider& packets, const DyadicInterval& I0, int M) {
    if (!(theta >= 0.0 && theta < 1.0)) throw BadConfig("mock_norm: theta must lie in [0,1)");
    const LocalizedCollection local = localize(coll, I0);
    double size = 0.0;
    if (!local.inside.empty())
        size = size_collection_tree(f, coll, j, packets, &local.inside).value;
    const double energy = energy_local(f, I0, M);
    if (theta == 0.0) return energy;
    return std::pow(size, theta) * std::pow(energy, 1.0 - theta);
}

namespace {

DyadicInterval full_frequency_extent(const MultiTile& P) {
    long long lo = P.freqs.front().index, hi = P.freqs.front().index + 1;
    for (const auto& w : P.freqs) {
        lo = std::min(lo, w.index);
        hi = std::max(hi, w.index + 1);
    }
    const int k = P.freqs.front().scale;
    return dyadic_hull(Dyadic2{lo, k}, Dyadic2{hi, k});
}

} // namespace

namespace {

// I' inside the concentric dilate 9 I_P, exact on the common lattice
bool inside_nine_dilate(const DyadicInterval& Ip, const DyadicInterval& base) {
    const int e = std::min(Ip.scale, base.scale);
    const long long lo = Ip.index << (Ip.scale - e);
    const long long hi = (Ip.index + 1) << (Ip.scale - e);
    const long long dlo = (base.index - 4) << (base.scale - e);
    const long long dhi = (base.index + 5) << (base.scale - e);
    return dlo <= lo && hi <= dhi;
}

} // namespace

SizeReport carleson_size_star(const GridFunction& g, const MultiTileCollection& coll, int M,
                              const LinearizingData* N) {
    if (coll.empty()) throw EmptyCollection();
    if (N && N->freq.size() != g.size()) throw GridMismatch("linearizing data size");

    SizeReport best;
    for (std::size_t pi = 0; pi < coll.size(); ++pi) {
        const MultiTile& P = coll[pi];
        const DyadicInterval omega = full_frequency_extent(P);
        DyadicInterval Ip = P.space;
        while (inside_nine_dilate(Ip, P.space)) {
            const int cell_scale = -Ip.scale;
            if (cell_scale <= omega.scale) {
                if (!N) {
                    const double v = lp_average(g, Ip, 1.0, M);
                    if (!best.witness_index || v > best.value) {
                        best.value = v;
                        best.witness_index = pi;
                    }
                } else {
                    const long long shift = omega.scale - cell_scale;
                    const long long first = omega.index << shift;
                    const long long count = 1LL << shift;
                    for (long long c = first; c < first + count; ++c) {
                        const DyadicInterval wp{cell_scale, c};
                        std::vector<double> terms(g.size(), 0.0);
                        for (std::size_t i = 0; i < g.size(); ++i) {
                            if (!wp.contains_point(N->freq[i])) continue;
                            terms[i] = std::abs(g[i]) * adapted_weight_eval(Ip, M, g.x(i));
                        }
                        const double v = g.step() * pairwise_sum(terms) / Ip.length();
                        if (!best.witness_index || v > best.value) {
                            best.value = v;
                            best.witness_index = pi;
                        }
                    }
                }
            }
            Ip = Ip.parent();
        }
    }
    return best;
}

} // namespace sparselab
