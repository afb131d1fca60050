#include "sparselab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sparselab/errors.hpp"

namespace sparselab {

namespace {

// e^{2 pi i xi x_i} for every sample of the grid geometry
std::vector<cplx> wave(const GridFunction& ref, double xi) {
    std::vector<cplx> w(ref.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double ph = 2.0 * std::numbers::pi * xi * ref.x(i);
        w[i] = cplx(std::cos(ph), std::sin(ph));
    }
    return w;
}

} // namespace

GridFunction bht_direct(const GridFunction& f, const GridFunction& g) {
    if (!f.same_grid(g)) throw GridMismatch();
    const Spectrum F = analyze(f);
    const Spectrum G = analyze(g);
    const std::size_t n = f.size();

    GridFunction out = GridFunction::zeros(f.origin(), f.step(), n);
    std::vector<cplx> prefix(n, cplx{0.0, 0.0}); // sum_{m1 < m2} F_{m1} e^{2 pi i xi_{m1} x}
    for (std::size_t m2 = 0; m2 < n; ++m2) {
        if (m2 > 0) {
            const std::size_t m1 = m2 - 1;
            const std::vector<cplx> w1 = wave(f, F.freq_of(m1));
            for (std::size_t i = 0; i < n; ++i) prefix[i] += F.coeff[m1] * w1[i];
        }
        if (G.coeff[m2] == cplx{0.0, 0.0}) continue;
        const std::vector<cplx> w2 = wave(f, G.freq_of(m2));
        for (std::size_t i = 0; i < n; ++i) out[i] += G.coeff[m2] * w2[i] * prefix[i];
    }
    return out;
}

GridFunction bht_direct_brute(const GridFunction& f, const GridFunction& g) {
    if (!f.same_grid(g)) throw GridMismatch();
    const Spectrum F = analyze(f);
    const Spectrum G = analyze(g);
    const std::size_t n = f.size();
    GridFunction out = GridFunction::zeros(f.origin(), f.step(), n);
    for (std::size_t m2 = 0; m2 < n; ++m2) {
        if (G.coeff[m2] == cplx{0.0, 0.0}) continue;
        const std::vector<cplx> w2 = wave(f, G.freq_of(m2));
        for (std::size_t i = 0; i < n; ++i) {
            // ascending partial sum recomputed from scratch: the addition
            // order matches the prefix evaluation bit for bit
            cplx s{0.0, 0.0};
            for (std::size_t m1 = 0; m1 < m2; ++m1) {
                const double ph = 2.0 * std::numbers::pi * F.freq_of(m1) * f.x(i);
                s += F.coeff[m1] * cplx(std::cos(ph), std::sin(ph));
            }
            out[i] += G.coeff[m2] * w2[i] * s;
        }
    }
    return out;
}

GridFunction bht_swapped_region(const GridFunction& f, const GridFunction& g) {
    // pairs with xi1 > xi2: BHT(g, f) with the roles of the spectra swapped
    if (!f.same_grid(g)) throw GridMismatch();
    const Spectrum F = analyze(f);
    const Spectrum G = analyze(g);
    const std::size_t n = f.size();
    GridFunction out = GridFunction::zeros(f.origin(), f.step(), n);
    std::vector<cplx> prefix(n, cplx{0.0, 0.0}); // sum_{m2 < m1} G_{m2} e^{...}
    for (std::size_t m1 = 0; m1 < n; ++m1) {
        if (m1 > 0) {
            const std::size_t m2 = m1 - 1;
            const std::vector<cplx> w2 = wave(f, G.freq_of(m2));
            for (std::size_t i = 0; i < n; ++i) prefix[i] += G.coeff[m2] * w2[i];
        }
        if (F.coeff[m1] == cplx{0.0, 0.0}) continue;
        const std::vector<cplx> w1 = wave(f, F.freq_of(m1));
        for (std::size_t i = 0; i < n; ++i) out[i] += F.coeff[m1] * w1[i] * prefix[i];
    }
    return out;
}

GridFunction bht_diagonal(const GridFunction& f, const GridFunction& g) {
    if (!f.same_grid(g)) throw GridMismatch();
    const Spectrum F = analyze(f);
    const Spectrum G = analyze(g);
    const std::size_t n = f.size();
    GridFunction out = GridFunction::zeros(f.origin(), f.step(), n);
    for (std::size_t m = 0; m < n; ++m) {
        const cplx c = F.coeff[m] * G.coeff[m];
        if (c == cplx{0.0, 0.0}) continue;
        const std::vector<cplx> w = wave(f, 2.0 * F.freq_of(m));
        for (std::size_t i = 0; i < n; ++i) out[i] += c * w[i];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Multiplier symbols
// ---------------------------------------------------------------------------

MultiplierSymbol symbol_one() {
    return {[](std::span<const double>) { return cplx{1.0, 0.0}; }, 0, "one"};
}

MultiplierSymbol symbol_shift(double a) {
    return {[a](std::span<const double> xi) {
                const double ph = 2.0 * std::numbers::pi * a * xi[0];
                return cplx{std::cos(ph), std::sin(ph)};
            },
            0, "shift"};
}

MultiplierSymbol symbol_sgn_regularized(double eps) {
    return {[eps](std::span<const double> xi) {
                const double d = xi[0] - xi[1];
                if (std::fabs(d) <= eps) return cplx{0.0, 0.0};
                return cplx{d > 0 ? 1.0 : -1.0, 0.0};
            },
            1, "sgnRegularized"};
}

MultiplierSymbol symbol_dist_power(double alpha, double eps) {
    // distance to the BHT line {xi1 = xi2} inside Gamma, regularized by
    // excluding a tube of radius eps
    return {[alpha, eps](std::span<const double> xi) {
                const double d = std::fabs(xi[0] - xi[1]) / std::numbers::sqrt2;
                if (d <= eps) return cplx{0.0, 0.0};
                return cplx{std::pow(d, alpha), 0.0};
            },
            1, "distPower"};
}

MultiplierSymbol symbol_mikhlin() {
    // 0-homogeneous away from the origin, singular at xi = 0 only (rank 0)
    return {[](std::span<const double> xi) {
                double s = 0.0;
                for (double v : xi) s += v * v;
                if (s == 0.0) return cplx{0.0, 0.0};
                return cplx{xi[0] * xi[1] / s, 0.0};
            },
            0, "mikhlin"};
}

MultiplierSymbol symbol_preset(const std::string& spec) {
    auto arg = [&spec](std::size_t pos) {
        const auto close = spec.find(')', pos);
        return std::stod(spec.substr(pos, close - pos));
    };
    if (spec == "one") return symbol_one();
    if (spec == "mikhlin") return symbol_mikhlin();
    if (spec.rfind("shift(", 0) == 0) return symbol_shift(arg(6));
    if (spec.rfind("sgnRegularized(", 0) == 0) return symbol_sgn_regularized(arg(15));
    if (spec.rfind("distPower(", 0) == 0) {
        const auto comma = spec.find(',');
        const double alpha = std::stod(spec.substr(10, comma - 10));
        const double eps = std::stod(spec.substr(comma + 1, spec.find(')') - comma - 1));
        return symbol_dist_power(alpha, eps);
    }
    throw BadConfig("unknown symbol preset: " + spec);
}

GridFunction multiplier_apply(const MultiplierSymbol& m, std::span<const GridFunction> f) {
    const std::size_t n = f.size();
    if (n != 2 && n != 3) throw BadConfig("multiplier_apply: n must be 2 or 3");
    for (std::size_t j = 1; j < n; ++j)
        if (!f[0].same_grid(f[j])) throw GridMismatch();

    const std::size_t N = f[0].size();
    std::vector<Spectrum> S;
    S.reserve(n);
    for (const GridFunction& fj : f) S.push_back(analyze(fj));
    const double dxi = S[0].freq_step;

    // accumulate products into total-frequency buckets, then one synthesis pass
    const long long half = static_cast<long long>(N) / 2;
    const long long buckets = static_cast<long long>(n) * static_cast<long long>(N);
    std::vector<cplx> bucket(static_cast<std::size_t>(buckets), cplx{0.0, 0.0});
    const long long offset = static_cast<long long>(n) * half; // lowest possible bin sum

    std::vector<double> xi(n + 1);
    if (n == 2) {
        for (std::size_t i1 = 0; i1 < N; ++i1) {
            if (S[0].coeff[i1] == cplx{0.0, 0.0}) continue;
            xi[0] = S[0].freq_of(i1);
            for (std::size_t i2 = 0; i2 < N; ++i2) {
                if (S[1].coeff[i2] == cplx{0.0, 0.0}) continue;
                xi[1] = S[1].freq_of(i2);
                xi[2] = -(xi[0] + xi[1]);
                const cplx mv = m.eval(xi);
                if (!std::isfinite(mv.real()) || !std::isfinite(mv.imag())) throw UnboundedSymbol();
                const long long bin = S[0].bin_of(i1) + S[1].bin_of(i2) + offset;
                bucket[static_cast<std::size_t>(bin)] += mv * S[0].coeff[i1] * S[1].coeff[i2];
            }
        }
    } else {
        for (std::size_t i1 = 0; i1 < N; ++i1) {
            if (S[0].coeff[i1] == cplx{0.0, 0.0}) continue;
            xi[0] = S[0].freq_of(i1);
            for (std::size_t i2 = 0; i2 < N; ++i2) {
                if (S[1].coeff[i2] == cplx{0.0, 0.0}) continue;
                xi[1] = S[1].freq_of(i2);
                for (std::size_t i3 = 0; i3 < N; ++i3) {
                    if (S[2].coeff[i3] == cplx{0.0, 0.0}) continue;
                    xi[2] = S[2].freq_of(i3);
                    xi[3] = -(xi[0] + xi[1] + xi[2]);
                    const cplx mv = m.eval(xi);
                    if (!std::isfinite(mv.real()) || !std::isfinite(mv.imag())) throw UnboundedSymbol();
                    const long long bin = S[0].bin_of(i1) + S[1].bin_of(i2) + S[2].bin_of(i3) + offset;
                    bucket[static_cast<std::size_t>(bin)] += mv * S[0].coeff[i1] * S[1].coeff[i2] * S[2].coeff[i3];
                }
            }
        }
    }
    GridFunction out = GridFunction::zeros(f[0].origin(), f[0].step(), N);
    parallel_for(N, [&](std::size_t i) {
        const double x = out.x(i);
        std::vector<cplx> terms;
        terms.reserve(bucket.size());
        for (std::size_t b = 0; b < bucket.size(); ++b) {
            if (bucket[b] == cplx{0.0, 0.0}) continue;
            const double sigma = dxi * static_cast<double>(static_cast<long long>(b) - offset);
            const double ph = 2.0 * std::numbers::pi * sigma * x;
            terms.push_back(bucket[b] * cplx(std::cos(ph), std::sin(ph)));
        }
        out[i] = pairwise_sum(terms);
    });
    return out;
}

// ---------------------------------------------------------------------------
// Model forms
// ---------------------------------------------------------------------------

namespace {

std::vector<std::size_t> canonical_tile_order(const MultiTileCollection& coll,
                                              const std::vector<std::size_t>* subset) {
    std::vector<std::size_t> idx;
    if (subset) idx = *subset;
    else {
        idx.resize(coll.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    }
    std::sort(idx.begin(), idx.end(), [&coll](std::size_t a, std::size_t b) {
        const MultiTile& A = coll[a];
        const MultiTile& B = coll[b];
        if (A.space.scale != B.space.scale) return A.space.scale > B.space.scale;
        if (A.space.index != B.space.index) return A.space.index < B.space.index;
        return A.freqs < B.freqs;
    });
    return idx;
}

} // namespace

cplx model_form(const MultiTileCollection& coll, PacketProvider& packets,
                std::span<const GridFunction> f, const std::vector<std::size_t>* subset) {
    const std::vector<std::size_t> idx = canonical_tile_order(coll, subset);
    if (idx.empty()) return {0.0, 0.0};
    const std::size_t np1 = coll[idx[0]].components();
    if (f.size() != np1) throw BadConfig("model_form: function count must match the arity");
    const double n_lin = static_cast<double>(np1) - 1.0;

    std::vector<cplx> terms(idx.size());
    for (std::size_t s = 0; s < idx.size(); ++s) {
        const MultiTile& P = coll[idx[s]];
        cplx prod = std::pow(P.space.length(), -0.5 * (n_lin - 1.0));
        for (std::size_t j = 0; j < np1; ++j)
            prod *= pair_inner(f[j], packets.get(P, j));
        terms[s] = prod;
    }
    return pairwise_sum(terms);
}

GridFunction model_operator_output(const MultiTileCollection& coll, PacketProvider& packets,
                                   std::span<const GridFunction> f,
                                   const std::vector<std::size_t>* subset) {
    const std::vector<std::size_t> idx = canonical_tile_order(coll, subset);
    GridFunction out = packets.grid().zeros();
    if (idx.empty()) return out;
    const std::size_t np1 = coll[idx[0]].components();
    if (f.size() + 1 != np1) throw BadConfig("model_operator_output: needs n inputs for arity n+1");
    const double n_lin = static_cast<double>(np1) - 1.0;

    for (std::size_t s : idx) {
        const MultiTile& P = coll[s];
        cplx c = std::pow(P.space.length(), -0.5 * (n_lin - 1.0));
        for (std::size_t j = 0; j + 1 < np1; ++j)
            c *= pair_inner(f[j], packets.get(P, j));
        const WavePacket& last = packets.get(P, np1 - 1);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * last.samples[i];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Carleson
// ---------------------------------------------------------------------------

GridFunction carleson_direct(const GridFunction& f) {
    const Spectrum F = analyze(f);
    const std::size_t n = f.size();
    GridFunction out = GridFunction::zeros(f.origin(), f.step(), n);
    parallel_for(n, [&](std::size_t i) {
        const double x = f.x(i);
        cplx s{0.0, 0.0};
        double best = 0.0; // the empty cut
        for (std::size_t m = 0; m < n; ++m) {
            const double ph = 2.0 * std::numbers::pi * F.freq_of(m) * x;
            s += F.coeff[m] * cplx(std::cos(ph), std::sin(ph));
            best = std::max(best, std::abs(s));
        }
        out[i] = best;
    });
    return out;
}

GridFunction carleson_model_output(const MultiTileCollection& coll, PacketProvider& packets,
                                   const GridFunction& f, const LinearizingData& N,
                                   const std::vector<std::size_t>* subset) {
    if (N.freq.size() != f.size()) throw GridMismatch("linearizing data size");
    const std::vector<std::size_t> idx = canonical_tile_order(coll, subset);
    GridFunction out = packets.grid().zeros();
    for (std::size_t s : idx) {
        const MultiTile& P = coll[s];
        if (P.components() != 2) throw BadConfig("carleson model needs bi-tiles");
        const cplx c = pair_inner(f, packets.get(P, 0));
        if (c == cplx{0.0, 0.0}) continue;
        const WavePacket& phi = packets.get(P, 0);
        const DyadicInterval& w2 = P.freqs[1];
        for (std::size_t i = 0; i < out.size(); ++i)
            if (w2.contains_point(N.freq[i])) out[i] += c * phi.samples[i];
    }
    return out;
}

cplx carleson_model_form(const MultiTileCollection& coll, PacketProvider& packets,
                         const GridFunction& f, const GridFunction& g,
                         const LinearizingData& N, const std::vector<std::size_t>* subset) {
    const GridFunction cf = carleson_model_output(coll, packets, f, N, subset);
    return pair_inner(cf, g);
}

LinearizingData carleson_argmax_cut(const GridFunction& f) {
    const Spectrum F = analyze(f);
    const std::size_t n = f.size();
    LinearizingData N;
    N.freq.assign(n, 0.0);
    parallel_for(n, [&](std::size_t i) {
        const double x = f.x(i);
        cplx s{0.0, 0.0};
        double best = 0.0;
        std::size_t best_cut = 0; // 0 = empty cut
        for (std::size_t m = 0; m < n; ++m) {
            const double ph = 2.0 * std::numbers::pi * F.freq_of(m) * x;
            s += F.coeff[m] * cplx(std::cos(ph), std::sin(ph));
            const double a = std::abs(s);
            if (a > best) {
                best = a;
                best_cut = m + 1;
            }
        }
        // N sits half a bin above the last included frequency
        const double base = best_cut == 0 ? F.freq_of(0) - F.freq_step : F.freq_of(best_cut - 1);
        N.freq[i] = base + 0.5 * F.freq_step;
    });
    return N;
}

// ---------------------------------------------------------------------------
// r-variation
// ---------------------------------------------------------------------------

double variation_jump_pow(double delta_sq, double r) {
    if (r == 2.0) return delta_sq;
    if (r == 3.0) return delta_sq * std::sqrt(delta_sq);
    if (r == 4.0) return delta_sq * delta_sq;
    return std::pow(delta_sq, 0.5 * r);
}

namespace {

template <typename T>
double r_variation_impl(std::span<const T> seq, double r) {
    if (r < 1.0) throw BadConfig("r_variation: r must be at least 1");
    const std::size_t n = seq.size();
    if (n < 2) return 0.0;
    std::vector<double> best(n, 0.0);
    double global = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
        double bj = 0.0;
        for (std::size_t i = 0; i < j; ++i) {
            double sq;
            if constexpr (std::is_same_v<T, cplx>) sq = std::norm(seq[j] - seq[i]);
            else { const double d = seq[j] - seq[i]; sq = d * d; }
            const double cand = best[i] + variation_jump_pow(sq, r);
            if (cand > bj) bj = cand;
        }
        best[j] = bj;
        if (bj > global) global = bj;
    }
    return std::pow(global, 1.0 / r);
}

} // namespace

double r_variation(std::span<const cplx> seq, double r) { return r_variation_impl(seq, r); }
double r_variation(std::span<const double> seq, double r) { return r_variation_impl(seq, r); }

GridFunction variational_carleson_direct(const GridFunction& f, double r) {
    if (!(r > 2.0)) throw BadConfig("variational_carleson_direct: r must exceed 2");
    const Spectrum F = analyze(f);
    const std::size_t n = f.size();
    GridFunction out = GridFunction::zeros(f.origin(), f.step(), n);
    parallel_for(n, [&](std::size_t i) {
        const double x = f.x(i);
        std::vector<cplx> partial(n + 1);
        partial[0] = cplx{0.0, 0.0};
        cplx s{0.0, 0.0};
        double single = 0.0; // the length-one chains from the empty cut,
                             // evaluated like carleson_direct for exactness
        for (std::size_t m = 0; m < n; ++m) {
            const double ph = 2.0 * std::numbers::pi * F.freq_of(m) * x;
            s += F.coeff[m] * cplx(std::cos(ph), std::sin(ph));
            partial[m + 1] = s;
            single = std::max(single, std::abs(s));
        }
        out[i] = std::max(r_variation(std::span<const cplx>(partial), r), single);
    });
    return out;
}

// ---------------------------------------------------------------------------
// Vector wrappers
// ---------------------------------------------------------------------------

GridFunction vector_lr_combine(std::span<const GridFunction> components, double r) {
    if (components.empty()) throw EmptyCollection("vector_lr_combine: no components");
    for (std::size_t k = 1; k < components.size(); ++k)
        if (!components[0].same_grid(components[k])) throw GridMismatch();
    if (!(r > 0.0)) throw BadConfig("vector_lr_combine: r must be positive");

    GridFunction out = GridFunction::zeros(components[0].origin(), components[0].step(),
                                           components[0].size());
    const bool sup = std::isinf(r);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (sup) {
            double m = 0.0;
            for (const GridFunction& c : components) m = std::max(m, std::abs(c[i]));
            out[i] = m;
        } else {
            double acc = 0.0;
            for (const GridFunction& c : components) acc += abs_pow(c[i], r);
            out[i] = abs_pow(acc, 1.0 / r);
        }
    }
    return out;
}

GridFunction vector_lr_combine(const VectorFunction& v) {
    return vector_lr_combine(std::span<const GridFunction>(v.components), v.r);
}

} // namespace sparselab
