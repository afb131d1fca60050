#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sparselab/operators.hpp"
#include "sparselab/sizes.hpp"

namespace sparselab {

// ---------------------------------------------------------------------------
// Sparse / Carleson family analytics (exact dyadic rational arithmetic).
// ---------------------------------------------------------------------------

struct CarlesonResult {
    Dyadic2 exact;             // sup_Q sum_{P inside Q} |P| / |Q|, as num*2^exp
    double value = 0.0;
    DyadicInterval witness;
};

/// Lambda-Carleson constant of a family of dyadic intervals. The sup over all
/// dyadic Q is attained at a member: splitting any non-member Q along its
/// maximal member subintervals can only lower the ratio. Members and their
/// ancestors are both scanned. Throws EmptyFamily.
CarlesonResult carleson_constant(const std::vector<DyadicInterval>& family);

struct EtaResult {
    Rational exact;            // largest eta with sum_{ch(Q)} |P| <= (1-eta)|Q|
    double value = 0.0;
    DyadicInterval witness;    // interval attaining the minimum
};

/// Largest eta such that every member's direct descendants carry at most
/// (1-eta) of its mass. Exact rational. Throws EmptyFamily.
EtaResult sparse_eta(const std::vector<DyadicInterval>& family);

struct SparseWitness {
    // E_Q = Q minus its direct descendants, as a disjoint list of dyadic
    // intervals, in family order
    std::vector<std::vector<DyadicInterval>> sets;
    Rational eta_achieved;
    bool pairwise_disjoint = false;
    bool lemma_easy_direction = false; // carleson_constant <= 1 / eta
};

/// Constructs the disjoint witness sets of the eta-sparse definition and
/// verifies the easy direction of the sparse/Carleson lemma exactly.
/// Throws DegenerateEta when sparse_eta == 0.
SparseWitness sparse_witness(const std::vector<DyadicInterval>& family);

// ---------------------------------------------------------------------------
// The stopping-time sparse constructor.
// ---------------------------------------------------------------------------

struct StoppingConfig {
    double C = 0.0;                 // selection constant; <= 0 means auto
    std::vector<double> s;          // one exponent per function
    double q = 1.0;
    int M = 2;                      // child averages use chi^M, parent chi^{M-1}
    int max_depth = 64;             // recursion guard
};

struct SparseEntry {
    DyadicInterval interval;
    std::vector<std::size_t> tiles; // P_Q as indices into the input collection
    int level = 0;
    std::optional<std::size_t> parent; // index into entries
};

struct SparseFamily {
    std::vector<SparseEntry> entries; // ordered by (level, interval position)
    Rational eta_witnessed;
    double carleson = 0.0;
    double C_used = 0.0;

    std::vector<DyadicInterval> intervals() const;
};

/// Weak-type constant of the chi-weighted dyadic maximal operator measured on
/// f: sup over thresholds of lambda^s |{M_s f > lambda}| / ||f||_s^s.
double measure_weak_constant(const GridFunction& f, double s, int M);

/// The auto constant: C = (2 * sum_j Ctilde_j)^(1 / min_j s_j) from the
/// measured weak constants, so the selected children of any interval carry at
/// most half its mass.
double auto_stopping_constant(std::span<const GridFunction> f, const StoppingConfig& cfg);

/// Theorem-style stopping time. Level 0 holds the maximal spatial intervals
/// of the collection; the children of Q0 are the maximal dyadic Q strictly
/// inside Q0 holding some tile interval and violating, for some j,
///   lp_average(f_j, Q, s_j, M) > C * lp_average(f_j, Q0, s_j, M-1).
/// P_Q collects the tiles inside Q that are inside no child of Q. Tiles with
/// their interval inside a violating interval always land in a deeper entry,
/// which makes the per-Q size cap exact.
SparseFamily build_sparse_collection(const MultiTileCollection& coll,
                                     std::span<const GridFunction> f, StoppingConfig cfg);

/// RHS of the sparse domination: sum over entries of
/// prod_j lp_average(f_j, Q, s_j, M)^q * |Q|.
double sparse_rhs(const SparseFamily& S, std::span<const GridFunction> f,
                  std::span<const double> s, double q, int M);

/// Deterministic report, entries ordered by (level, interval position):
/// {"entries":[{"interval":{"k":..,"n":..},"numTiles":..,"level":..}],
///  "eta":..,"carleson":..}
std::string sparse_family_json(const SparseFamily& S);

// ---------------------------------------------------------------------------
// Level-set machinery.
// ---------------------------------------------------------------------------

struct LevelSet {
    int k = 0;                     // 2^{k-1} < |f| <= 2^k on F_k
    std::vector<std::size_t> F;    // sample indices
    GridFunction f_k;              // |f_k| <= 1, supported on F_k
};

/// f = sum_k 2^k f_k 1_{F_k} with half-open brackets; the reconstruction is
/// exact because the level scalings are powers of two.
std::vector<LevelSet> level_set_decompose(const GridFunction& f);

struct RestrictedToGeneralReport {
    double lhs = 0.0;  // sum_k 2^k size(1_{F_k})^alpha
    double rhs = 0.0;  // size_lp(f, ., p, M-1)
    double ratio = 0.0;
};

/// Numerical form of the restricted-type-to-general passage: bounded ratios
/// need p*alpha > 1; p*alpha <= 1 is runnable to demonstrate divergence.
RestrictedToGeneralReport restricted_to_general_check(const GridFunction& f,
                                                      const MultiTileCollection& coll,
                                                      const DyadicInterval& I0, double alpha,
                                                      double p, int M);

// ---------------------------------------------------------------------------
// Alpha tuples.
// ---------------------------------------------------------------------------

struct AlphaTuple {
    int n = 0;
    int k = 0;
    std::vector<std::vector<int>> tuples;  // ordered k-tuples of {0..n}
    std::vector<Rational> thetas;          // one per tuple, summing to 1
    std::vector<Rational> alphas;          // n+1 entries, sum = k exactly
    bool feasible = false;                 // all alpha_j < 1/2
};

/// alpha_j = sum of the thetas of the tuples containing j. Exact rationals.
/// Throws BadThetaSum when the thetas do not sum to 1 and RankTooLarge when
/// 2k >= n+1.
AlphaTuple alpha_tuple(int n, int k, const std::vector<Rational>& thetas);
AlphaTuple alpha_tuple_uniform(int n, int k);

// ---------------------------------------------------------------------------
// Size-level stopping time.
// ---------------------------------------------------------------------------

struct SizeLevel {
    int n = 0; // averages lie in (2^{-n-1}, 2^{-n}]
    std::vector<DyadicInterval> intervals;
    std::vector<std::vector<std::size_t>> tiles; // per interval
    double sum_lengths = 0.0;
    double weak_constant = 0.0; // sum |I| / (2^n ||f||_1)
};

struct LevelStoppingResult {
    std::vector<SizeLevel> levels;
    double kappa = 0.0; // Carleson constant of the union family
};

/// Maximal dyadic intervals with bracketed averages, tiles assigned and
/// removed level by level until the stock empties. Caller normalizes
/// |f| <= 1; f == 0 yields no levels.
LevelStoppingResult level_stopping_time(const GridFunction& f, const MultiTileCollection& coll,
                                        int M);

// ---------------------------------------------------------------------------
// Local estimate verification.
// ---------------------------------------------------------------------------

struct LocalEstimateReport {
    double lhs = 0.0;        // |Lambda_{P(I0)}|
    double rhs_product = 0.0; // prod size^{1-alpha_j} * |I0|
    double ratio = 0.0;
};

/// lhs from the supplied form evaluator on the localized collection, rhs the
/// product of plain sizes of the majorant indicators with exponents
/// 1 - alpha_j. Never asserts a universal constant; ratios feed regression
/// gates.
LocalEstimateReport local_estimate_check(
    const std::function<cplx(const std::vector<std::size_t>&)>& form_on_subset,
    const MultiTileCollection& coll, const DyadicInterval& I0,
    std::span<const GridFunction> majorants, std::span<const double> alphas, int M);

/// Convenience wrapper evaluating the model form.
LocalEstimateReport local_estimate_check_model(const MultiTileCollection& coll,
                                               PacketProvider& packets,
                                               const DyadicInterval& I0,
                                               std::span<const GridFunction> f,
                                               std::span<const GridFunction> majorants,
                                               std::span<const double> alphas, int M);

} // namespace sparselab
