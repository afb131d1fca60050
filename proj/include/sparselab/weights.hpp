#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sparselab/grid.hpp"

namespace sparselab {

/// Nonnegative real-valued grid function, optionally tagged with the
/// closed-form it samples.
struct WeightFunction {
    GridFunction values;
    struct PowerTag {
        double exponent = 0.0;
        double clip = 0.0;
    };
    std::optional<PowerTag> power_tag;
};

WeightFunction weight_one(const GridFunction& like);
/// |x|^a clipped below `clip` (clip <= 0 means one grid step), exact on the
/// sample points.
WeightFunction weight_power(const GridFunction& like, double a, double clip);
/// Dyadic step weight taking `levels` values 2^0 .. 2^{levels-1} on equal
/// dyadic blocks.
WeightFunction weight_step(const GridFunction& like, int levels);

/// Components w_1..w_n with exponents q_1..q_n; nu = prod w_j^{q/q_j} with
/// 1/q = sum 1/q_j. q_j = infinity is allowed and forces w_j == 1.
struct VectorWeight {
    std::vector<WeightFunction> w;
    std::vector<double> q;

    double holder_q() const;
    GridFunction nu() const;
};

/// \vec M_{s_1..s_n}(f_1..f_n)(x) = sup over dyadic Q containing x of
/// prod_j ((1/|Q|) int_Q |f_j|^{s_j})^{1/s_j}, plain interior averages.
GridFunction multilinear_maximal(std::span<const GridFunction> f, std::span<const double> s,
                                 std::span<const DyadicInterval> universe);

/// [w]_{A_p} = sup_Q avg_Q(w) (avg_Q(w^{1-p'}))^{p-1}. Rejects vanishing
/// samples (WeightVanishes).
double ap_characteristic(const WeightFunction& w, double p,
                         std::span<const DyadicInterval> universe);

/// [w]_{RH_s} = sup_Q (avg_Q w^s)^{1/s} / avg_Q w.
double rh_characteristic(const WeightFunction& w, double s,
                         std::span<const DyadicInterval> universe);

/// [w_vec]_{A_{q,s}} = sup_Q (avg nu)^{1/q} prod_j (avg w_j^{-s_j/(q_j-s_j)})^{1/s_j-1/q_j}.
/// Throws ExponentClash when some s_j >= q_j.
double vector_aqs_characteristic(const VectorWeight& vw, std::span<const double> s,
                                 std::span<const DyadicInterval> universe);

/// Joint condition: sup_Q (avg w^{s_{n+1}})^{1/s_{n+1}}
/// prod_j (avg w_j^{-s_j q_j/(q_j-s_j)})^{1/s_j-1/q_j}, w = prod w_j.
/// q_j = infinity requires w_j == 1 (BadConfig otherwise).
double joint_condition_value(std::span<const WeightFunction> w, std::span<const double> q,
                             std::span<const double> s, double s_last,
                             std::span<const DyadicInterval> universe);

struct RhVectorLemmaReport {
    double C = 0.0;        // sup_Q (avg nu^{beta/q})^{1/beta} prod (avg w_j^{-beta_j/q_j})^{1/beta_j}
    double t = 0.0;        // 1 + beta sum 1/beta_i
    std::vector<double> t_j;
    double nu_at = 0.0;    // [nu^{beta/q}]_{A_t}
    std::vector<double> w_atj; // [w_j^{-beta_j/q_j}]_{A_{t_j}}
    bool nu_bound = false;     // nu_at <= C^beta (within slack)
    bool w_bounds = false;     // each w_atj <= C^{beta_j}
};

/// Numerical check of the vector-weight reverse-Holder lemma: the A_t
/// characteristic of nu^{beta/q} and the A_{t_j} characteristics of
/// w_j^{-beta_j/q_j} are bounded by C^beta resp. C^{beta_j}, within
/// 1e-6 relative slack for Riemann error.
RhVectorLemmaReport rh_vector_lemma_check(const VectorWeight& vw, double beta,
                                          std::span<const double> beta_j,
                                          std::span<const DyadicInterval> universe);

struct FeffermanSteinReport {
    double lhs = 0.0;  // || operator output ||_{L^q(v)}
    double rhs = 0.0;  // || multilinear maximal ||_{L^q(v)}
    double ratio = 0.0;
};

FeffermanSteinReport fefferman_stein_ratio(const GridFunction& operator_output,
                                           std::span<const GridFunction> f,
                                           std::span<const double> s, const WeightFunction& v,
                                           double q);

struct DoublingDiagnostic {
    std::vector<double> chars; // A_p characteristic over [lo, lo + 2^j * clipspan)
    double growth = 0.0;       // last / first
    bool fired = false;        // growth exceeds the pinned threshold
};

/// Divergence diagnostic for the clipped power weight |x|^a in A_p: the
/// characteristic over intervals doubling away from the clipped singularity
/// grows geometrically exactly when a >= p-1, and saturates otherwise.
/// doublings intervals [0, 2^{-j0+d}) for d = 0..doublings are scanned.
DoublingDiagnostic power_weight_doubling_diagnostic(const GridFunction& like, double a, double p,
                                                    int doublings, double fire_threshold = 2.0);

} // namespace sparselab
