#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sparselab/packets.hpp"
#include "sparselab/sizes.hpp"

namespace sparselab {

// ---------------------------------------------------------------------------
// Direct (brute-force Fourier) reference operators.
// ---------------------------------------------------------------------------

/// BHT(f,g)(x) = sum over strictly ordered frequency pairs xi1 < xi2 of
/// F(xi1) G(xi2) e^{2 pi i (xi1+xi2) x}. Prefix-sum evaluation, O(N^2).
GridFunction bht_direct(const GridFunction& f, const GridFunction& g);

/// Same sum recomputed from scratch per cut in the identical addition order;
/// bit-compares against bht_direct in the tests. Only sensible for small N.
GridFunction bht_direct_brute(const GridFunction& f, const GridFunction& g);

/// Region sums completing the partition identity: pairs with xi1 > xi2 and
/// the diagonal xi1 == xi2.
GridFunction bht_swapped_region(const GridFunction& f, const GridFunction& g);
GridFunction bht_diagonal(const GridFunction& f, const GridFunction& g);

/// Multiplier symbol m(xi_1, .., xi_{n+1}) evaluated on the discrete
/// constraint set xi_1 + ... + xi_{n+1} = 0.
struct MultiplierSymbol {
    std::function<cplx(std::span<const double>)> eval;
    int singular_subspace_dim = 0;
    std::string name = "custom";
};

/// Named presets: one | shift(a) | sgnRegularized(eps) | distPower(alpha, eps)
/// | mikhlin. eps is the exclusion radius around the singular set in grid
/// cells; excluded tuples contribute zero.
MultiplierSymbol symbol_one();
MultiplierSymbol symbol_shift(double a);
MultiplierSymbol symbol_sgn_regularized(double eps);
MultiplierSymbol symbol_dist_power(double alpha, double eps);
MultiplierSymbol symbol_mikhlin();
MultiplierSymbol symbol_preset(const std::string& spec);

/// T(f_1,...,f_n)(x) = sum over frequency tuples of
/// m(xi_1,..,xi_n, -sum xi_j) prod F_j(xi_j) e^{2 pi i (sum xi_j) x}.
/// n = 2 costs O(N^2), n = 3 costs O(N^3): small grids only for n = 3.
/// Throws UnboundedSymbol when |m| is not finite on the evaluation set.
GridFunction multiplier_apply(const MultiplierSymbol& m, std::span<const GridFunction> f);

// ---------------------------------------------------------------------------
// Model forms built from tiles and packets.
// ---------------------------------------------------------------------------

/// Lambda_P(f_1,...,f_{n+1}) = sum_P |I_P|^{-(n-1)/2} prod_j <f_j, phi_P^j>,
/// summed in the canonical tile order (scale, then position).
cplx model_form(const MultiTileCollection& coll, PacketProvider& packets,
                std::span<const GridFunction> f,
                const std::vector<std::size_t>* subset = nullptr);

/// The n-linear model operator output
/// T(f_1,..,f_n)(x) = sum_P |I_P|^{-(n-1)/2} prod_{j<n+1} <f_j, phi_P^j> phi_P^{n+1}(x).
GridFunction model_operator_output(const MultiTileCollection& coll, PacketProvider& packets,
                                   std::span<const GridFunction> f,
                                   const std::vector<std::size_t>* subset = nullptr);

// ---------------------------------------------------------------------------
// Carleson operators.
// ---------------------------------------------------------------------------

/// C f(x) = max over the N+1 grid frequency cuts of |partial Fourier sum|.
GridFunction carleson_direct(const GridFunction& f);

/// Model output C_P f(x) = sum_P <f, phi_P^1> phi_P^1(x) 1_{N(x) in w_{P_2}}
/// over a bi-tile collection; masks evaluated per sample exactly.
GridFunction carleson_model_output(const MultiTileCollection& coll, PacketProvider& packets,
                                   const GridFunction& f, const LinearizingData& N,
                                   const std::vector<std::size_t>* subset = nullptr);

/// Bilinear form int C_P f(x) conj(g)(x) dx.
cplx carleson_model_form(const MultiTileCollection& coll, PacketProvider& packets,
                         const GridFunction& f, const GridFunction& g,
                         const LinearizingData& N,
                         const std::vector<std::size_t>* subset = nullptr);

/// Linearizing frequency realizing the Carleson supremum: per sample, the
/// midpoint just above the last bin of the maximizing partial sum.
LinearizingData carleson_argmax_cut(const GridFunction& f);

// ---------------------------------------------------------------------------
// r-variation.
// ---------------------------------------------------------------------------

/// Exact max over increasing index chains of (sum |a_{n_l} - a_{n_{l-1}}|^r)^{1/r}
/// by the O(K^2) dynamic program best[j] = max_i (best[i] + |a_j - a_i|^r).
/// r >= 1 (r = 1 telescopes to the total variation of the extremes).
double r_variation(std::span<const cplx> seq, double r);
double r_variation(std::span<const double> seq, double r);

/// |delta|^r from |delta|^2, the scalar primitive of the DP (specialized for
/// r in {2,3,4}); shared with the exhaustive oracle so the two enumerations
/// agree bit for bit.
double variation_jump_pow(double delta_sq, double r);

/// At each sample, the r-variation of the partial Fourier sums over all grid
/// cuts (the cut chain starts at the empty sum). Runs samples in parallel;
/// the per-sample DP order is fixed. Requires r > 2.
GridFunction variational_carleson_direct(const GridFunction& f, double r);

// ---------------------------------------------------------------------------
// Depth-1 vector wrappers.
// ---------------------------------------------------------------------------

/// Finite family of components on one grid with an l^r exponent.
struct VectorFunction {
    std::vector<GridFunction> components;
    double r = 2.0; // l^r exponent; infinity() for sup

    std::size_t depth_size() const { return components.size(); }
    const GridFunction& grid_ref() const { return components.front(); }
};

/// Pointwise (sum_k |.|^r)^{1/r}, or the sup for r = infinity.
GridFunction vector_lr_combine(const VectorFunction& v);
GridFunction vector_lr_combine(std::span<const GridFunction> components, double r);

} // namespace sparselab
