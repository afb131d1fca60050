#include "sparselab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sparselab/errors.hpp"

namespace sparselab {

namespace {

// plain interior average of g(w(x)) over Q, g applied per sample
template <typename Fn>
double interior_average(const GridFunction& w, const DyadicInterval& Q, Fn&& g) {
    const double lo = Q.lower(), hi = Q.upper();
    std::vector<double> terms;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double x = w.x(i);
        if (x >= lo && x < hi) terms.push_back(g(w[i].real()));
    }
    if (terms.empty()) throw GridTooCoarse("interval holds no samples");
    return w.step() * pairwise_sum(terms) / Q.length();
}

void require_positive(const WeightFunction& w) {
    for (std::size_t i = 0; i < w.values.size(); ++i)
        if (!(w.values[i].real() > 0.0)) throw WeightVanishes();
}

} // namespace

WeightFunction weight_one(const GridFunction& like) {
    GridFunction v = GridFunction::zeros(like.origin(), like.step(), like.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0;
    return {std::move(v), std::nullopt};
}

WeightFunction weight_power(const GridFunction& like, double a, double clip) {
    if (clip <= 0.0) clip = like.step();
    GridFunction v = GridFunction::zeros(like.origin(), like.step(), like.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = std::pow(std::max(std::fabs(v.x(i)), clip), a);
    return {std::move(v), WeightFunction::PowerTag{a, clip}};
}

WeightFunction weight_step(const GridFunction& like, int levels) {
    if (levels < 1) throw BadConfig("weight_step: need at least one level");
    GridFunction v = GridFunction::zeros(like.origin(), like.step(), like.size());
    const std::size_t block = std::max<std::size_t>(1, v.size() / static_cast<std::size_t>(levels));
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto lvl = std::min<std::size_t>(i / block, static_cast<std::size_t>(levels - 1));
        v[i] = std::ldexp(1.0, static_cast<int>(lvl));
    }
    return {std::move(v), std::nullopt};
}

double VectorWeight::holder_q() const {
    double inv = 0.0;
    for (double qj : q)
        if (!std::isinf(qj)) inv += 1.0 / qj;
    if (inv == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / inv;
}

GridFunction VectorWeight::nu() const {
    if (w.empty()) throw EmptyCollection("vector weight has no components");
    const double qq = holder_q();
    GridFunction out = GridFunction::zeros(w[0].values.origin(), w[0].values.step(), w[0].values.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        double prod = 1.0;
        for (std::size_t j = 0; j < w.size(); ++j) {
            if (std::isinf(q[j])) continue; // w_j == 1 by convention
            prod *= std::pow(w[j].values[i].real(), qq / q[j]);
        }
        out[i] = prod;
    }
    return out;
}

GridFunction multilinear_maximal(std::span<const GridFunction> f, std::span<const double> s,
                                 std::span<const DyadicInterval> universe) {
    if (f.empty() || f.size() != s.size())
        throw BadConfig("multilinear_maximal: one exponent per function");
    for (std::size_t j = 1; j < f.size(); ++j)
        if (!f[0].same_grid(f[j])) throw GridMismatch();
    const GridFunction& ref = f[0];
    GridFunction out = GridFunction::zeros(ref.origin(), ref.step(), ref.size());
    for (const DyadicInterval& Q : universe) {
        double prod = 1.0;
        for (std::size_t j = 0; j < f.size(); ++j)
            prod *= std::pow(interior_average_abs_pow(f[j], Q, s[j]), 1.0 / s[j]);
        const auto first = static_cast<std::size_t>(
            std::max(0.0, std::ceil((Q.lower() - ref.origin()) / ref.step() - 1e-12)));
        for (std::size_t i = first; i < ref.size() && ref.x(i) < Q.upper(); ++i)
            if (prod > out[i].real()) out[i] = prod;
    }
    return out;
}

double ap_characteristic(const WeightFunction& w, double p,
                         std::span<const DyadicInterval> universe) {
    if (!(p > 1.0)) throw BadConfig("ap_characteristic: p must exceed 1");
    require_positive(w);
    const double dual = 1.0 - p / (p - 1.0); // 1 - p'
    double best = 0.0;
    for (const DyadicInterval& Q : universe) {
        const double a = interior_average(w.values, Q, [](double v) { return v; });
        const double b = interior_average(w.values, Q, [dual](double v) { return std::pow(v, dual); });
        best = std::max(best, a * std::pow(b, p - 1.0));
    }
    return best;
}

double rh_characteristic(const WeightFunction& w, double s,
                         std::span<const DyadicInterval> universe) {
    if (!(s > 1.0)) throw BadConfig("rh_characteristic: s must exceed 1");
    double best = 0.0;
    for (const DyadicInterval& Q : universe) {
        const double a = interior_average(w.values, Q, [](double v) { return v; });
        if (!(a > 0.0)) throw WeightVanishes("weight vanishes on a full interval");
        const double b = interior_average(w.values, Q, [s](double v) { return std::pow(v, s); });
        best = std::max(best, std::pow(b, 1.0 / s) / a);
    }
    return best;
}

double vector_aqs_characteristic(const VectorWeight& vw, std::span<const double> s,
                                 std::span<const DyadicInterval> universe) {
    if (s.size() != vw.w.size()) throw BadConfig("one s_j per component");
    for (std::size_t j = 0; j < s.size(); ++j)
        if (!std::isinf(vw.q[j]) && s[j] >= vw.q[j]) throw ExponentClash();
    const double q = vw.holder_q();
    const GridFunction nu = vw.nu();
    double best = 0.0;
    for (const DyadicInterval& Q : universe) {
        double prod = std::pow(interior_average(nu, Q, [](double v) { return v; }), 1.0 / q);
        for (std::size_t j = 0; j < vw.w.size(); ++j) {
            if (std::isinf(vw.q[j])) continue;
            const double e = -s[j] / (vw.q[j] - s[j]);
            const double avg = interior_average(vw.w[j].values, Q, [e](double v) { return std::pow(v, e); });
            prod *= std::pow(avg, 1.0 / s[j] - 1.0 / vw.q[j]);
        }
        best = std::max(best, prod);
    }
    return best;
}

double joint_condition_value(std::span<const WeightFunction> w, std::span<const double> q,
                             std::span<const double> s, double s_last,
                             std::span<const DyadicInterval> universe) {
    if (w.size() != q.size() || w.size() != s.size())
        throw BadConfig("joint_condition_value: mismatched sizes");
    if (!(s_last > 0.0)) throw BadConfig("joint_condition_value: s_{n+1} must be positive");
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (std::isinf(q[j])) {
            for (std::size_t i = 0; i < w[j].values.size(); ++i)
                if (w[j].values[i].real() != 1.0)
                    throw BadConfig("q_j = infinity requires w_j == 1");
        } else if (s[j] >= q[j]) {
            throw ExponentClash();
        }
    }
    // w = prod w_j
    GridFunction prod = GridFunction::zeros(w[0].values.origin(), w[0].values.step(), w[0].values.size());
    for (std::size_t i = 0; i < prod.size(); ++i) {
        double v = 1.0;
        for (const auto& wj : w) v *= wj.values[i].real();
        prod[i] = v;
    }
    double best = 0.0;
    for (const DyadicInterval& Q : universe) {
        double val = std::pow(interior_average(prod, Q, [s_last](double v) { return std::pow(v, s_last); }),
                              1.0 / s_last);
        for (std::size_t j = 0; j < w.size(); ++j) {
            if (std::isinf(q[j])) continue;
            const double e = -s[j] * q[j] / (q[j] - s[j]);
            const double avg = interior_average(w[j].values, Q, [e](double v) { return std::pow(v, e); });
            val *= std::pow(avg, 1.0 / s[j] - 1.0 / q[j]);
        }
        best = std::max(best, val);
    }
    return best;
}

RhVectorLemmaReport rh_vector_lemma_check(const VectorWeight& vw, double beta,
                                          std::span<const double> beta_j,
                                          std::span<const DyadicInterval> universe) {
    if (beta_j.size() != vw.w.size()) throw BadConfig("one beta_j per component");
    if (!(beta > 0.0)) throw BadConfig("beta must be positive");
    for (double b : beta_j)
        if (!(b > 0.0)) throw BadConfig("beta_j must be positive");
    for (const auto& wj : vw.w) require_positive(wj);

    RhVectorLemmaReport rep;
    const double q = vw.holder_q();
    const GridFunction nu = vw.nu();

    // C of the vector-weight alpha condition
    for (const DyadicInterval& Q : universe) {
        double prod = std::pow(
            interior_average(nu, Q, [beta, q](double v) { return std::pow(v, beta / q); }), 1.0 / beta);
        for (std::size_t j = 0; j < vw.w.size(); ++j) {
            const double e = -beta_j[j] / vw.q[j];
            const double avg = interior_average(vw.w[j].values, Q, [e](double v) { return std::pow(v, e); });
            prod *= std::pow(avg, 1.0 / beta_j[j]);
        }
        rep.C = std::max(rep.C, prod);
    }

    double inv_sum = 0.0;
    for (double b : beta_j) inv_sum += 1.0 / b;
    rep.t = 1.0 + beta * inv_sum;
    for (std::size_t j = 0; j < beta_j.size(); ++j)
        rep.t_j.push_back(1.0 + beta_j[j] * (1.0 / beta + inv_sum - 1.0 / beta_j[j]));

    // derived weights
    GridFunction nu_pow = GridFunction::zeros(nu.origin(), nu.step(), nu.size());
    for (std::size_t i = 0; i < nu.size(); ++i)
        nu_pow[i] = std::pow(nu[i].real(), beta / q);
    rep.nu_at = ap_characteristic({nu_pow, std::nullopt}, rep.t, universe);

    for (std::size_t j = 0; j < vw.w.size(); ++j) {
        GridFunction wp = GridFunction::zeros(nu.origin(), nu.step(), nu.size());
        for (std::size_t i = 0; i < wp.size(); ++i)
            wp[i] = std::pow(vw.w[j].values[i].real(), -beta_j[j] / vw.q[j]);
        rep.w_atj.push_back(ap_characteristic({wp, std::nullopt}, rep.t_j[j], universe));
    }

    const double slack = 1.0 + 1e-6;
    rep.nu_bound = rep.nu_at <= std::pow(rep.C, beta) * slack;
    rep.w_bounds = true;
    for (std::size_t j = 0; j < rep.w_atj.size(); ++j)
        if (rep.w_atj[j] > std::pow(rep.C, beta_j[j]) * slack) rep.w_bounds = false;
    return rep;
}

FeffermanSteinReport fefferman_stein_ratio(const GridFunction& operator_output,
                                           std::span<const GridFunction> f,
                                           std::span<const double> s, const WeightFunction& v,
                                           double q) {
    if (!(q > 0.0)) throw BadConfig("fefferman_stein_ratio: q must be positive");
    FeffermanSteinReport rep;
    rep.lhs = lq_norm_weighted(operator_output, v.values, q);
    const auto universe = interval_universe(operator_output);
    const GridFunction maximal = multilinear_maximal(f, s, universe);
    rep.rhs = lq_norm_weighted(maximal, v.values, q);
    rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
    return rep;
}

DoublingDiagnostic power_weight_doubling_diagnostic(const GridFunction& like, double a, double p,
                                                    int doublings, double fire_threshold) {
    const WeightFunction w = weight_power(like, a, 0.0);
    // Intervals [0, 2^{j0+d}) doubling away from the clip scale. The smallest
    // holds a handful of samples above the clip.
    int step_exp = 0;
    std::frexp(like.step(), &step_exp);
    const int j0 = step_exp + 1; // ~8 samples in the smallest interval
    DoublingDiagnostic diag;
    for (int d = 0; d <= doublings; ++d) {
        const DyadicInterval Q{j0 + d, 0};
        if (Q.upper() > like.origin() + like.grid_length()) break;
        std::vector<DyadicInterval> one{Q};
        diag.chars.push_back(ap_characteristic(w, p, one));
    }
    // The clip transient contaminates the first few scales; the verdict reads
    // the growth across the outer half of the doubling chain, where inside
    // A_p the characteristic is scale-invariant and outside it keeps growing.
    // The divergent factor is (avg dual)^{p-1}, so the (p-1)-th root measures
    // the dual average's own doubling rate, uniformly across p.
    if (diag.chars.size() >= 2)
        diag.growth = std::pow(diag.chars.back() / diag.chars[diag.chars.size() / 2],
                               1.0 / (p - 1.0));
    diag.fired = diag.growth > fire_threshold;
    return diag;
}

} // namespace sparselab
