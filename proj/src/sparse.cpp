#include "sparselab/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "sparselab/errors.hpp"

namespace sparselab {

namespace {

// Deduplicated copy, sorted by (scale desc, position) for deterministic scans.
std::vector<DyadicInterval> canonical_family(const std::vector<DyadicInterval>& family) {
    std::vector<DyadicInterval> v = family;
    std::sort(v.begin(), v.end(), [](const DyadicInterval& a, const DyadicInterval& b) {
        if (a.scale != b.scale) return a.scale > b.scale;
        return Dyadic2{a.index, a.scale} < Dyadic2{b.index, b.scale};
    });
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// Direct descendants: maximal members strictly inside Q.
std::vector<DyadicInterval> direct_children(const std::vector<DyadicInterval>& fam,
                                            const DyadicInterval& Q) {
    std::vector<DyadicInterval> inside;
    for (const auto& P : fam)
        if (Q.strictly_contains(P)) inside.push_back(P);
    std::vector<DyadicInterval> maximal;
    for (const auto& P : inside) {
        bool covered = false;
        for (const auto& R : inside)
            if (!(R == P) && R.contains(P)) { covered = true; break; }
        if (!covered) maximal.push_back(P);
    }
    return maximal;
}

} // namespace

CarlesonResult carleson_constant(const std::vector<DyadicInterval>& family) {
    if (family.empty()) throw EmptyFamily();
    const std::vector<DyadicInterval> fam = canonical_family(family);

    std::vector<DyadicInterval> candidates = fam;
    std::set<DyadicInterval> seen(fam.begin(), fam.end());
    const int top_scale = std::max_element(fam.begin(), fam.end(),
        [](const DyadicInterval& a, const DyadicInterval& b) { return a.scale < b.scale; })->scale;
    for (const auto& P : fam) {
        DyadicInterval a = P;
        while (a.scale < top_scale) {
            a = a.parent();
            if (seen.insert(a).second) candidates.push_back(a);
        }
    }

    CarlesonResult best;
    bool first = true;
    for (const auto& Q : candidates) {
        Dyadic2 mass = Dyadic2::zero();
        for (const auto& P : fam)
            if (Q.contains(P)) mass = mass + P.exact_length();
        // ratio = mass / |Q| = mass * 2^{-scale}
        const Dyadic2 ratio{mass.num, mass.exp - Q.scale};
        if (first || best.exact < ratio) {
            best.exact = ratio;
            best.witness = Q;
            first = false;
        }
    }
    best.value = best.exact.to_double();
    return best;
}

EtaResult sparse_eta(const std::vector<DyadicInterval>& family) {
    if (family.empty()) throw EmptyFamily();
    const std::vector<DyadicInterval> fam = canonical_family(family);

    EtaResult out;
    out.exact = Rational{1, 1};
    out.witness = fam.front();
    for (const auto& Q : fam) {
        Dyadic2 child_mass = Dyadic2::zero();
        for (const auto& P : direct_children(fam, Q))
            child_mass = child_mass + P.exact_length();
        // eta_Q = 1 - child_mass / |Q|; the interval length is 2^scale
        const Dyadic2 r = Dyadic2{child_mass.num, child_mass.exp - Q.scale}.normalized();
        Rational ratio{r.num, 1};
        if (r.exp >= 0) ratio.num <<= r.exp;
        else ratio.den = 1LL << (-r.exp);
        ratio.normalize();
        const Rational eta = Rational{1, 1} - ratio;
        if (eta < out.exact) {
            out.exact = eta;
            out.witness = Q;
        }
    }
    out.value = out.exact.to_double();
    return out;
}

namespace {

// Q minus a disjoint list of dyadic subintervals, as disjoint dyadic pieces.
std::vector<DyadicInterval> dyadic_subtract(const DyadicInterval& Q,
                                            const std::vector<DyadicInterval>& holes) {
    std::vector<DyadicInterval> out;
    std::vector<DyadicInterval> stack{Q};
    while (!stack.empty()) {
        const DyadicInterval cur = stack.back();
        stack.pop_back();
        bool hit = false;
        for (const auto& H : holes) {
            if (H.contains(cur)) { hit = true; break; } // fully removed
            if (cur.strictly_contains(H)) {
                stack.push_back(cur.left_child());
                stack.push_back(cur.right_child());
                hit = true;
                break;
            }
        }
        if (!hit) out.push_back(cur);
    }
    return out;
}

bool interval_lists_disjoint(const std::vector<DyadicInterval>& a,
                             const std::vector<DyadicInterval>& b) {
    for (const auto& x : a)
        for (const auto& y : b)
            if (!x.disjoint(y)) return false;
    return true;
}

} // namespace

SparseWitness sparse_witness(const std::vector<DyadicInterval>& family) {
    const EtaResult eta = sparse_eta(family);
    if (eta.exact.num == 0) throw DegenerateEta();
    const std::vector<DyadicInterval> fam = canonical_family(family);

    SparseWitness w;
    w.eta_achieved = Rational{1, 1};
    for (const auto& Q : fam) {
        const auto holes = direct_children(fam, Q);
        auto eq = dyadic_subtract(Q, holes);
        Dyadic2 mass = Dyadic2::zero();
        for (const auto& piece : eq) mass = mass + piece.exact_length();
        const Dyadic2 r = Dyadic2{mass.num, mass.exp - Q.scale}.normalized();
        Rational ratio{r.num, 1};
        if (r.exp >= 0) ratio.num <<= r.exp;
        else ratio.den = 1LL << (-r.exp);
        ratio.normalize();
        if (ratio < w.eta_achieved) w.eta_achieved = ratio;
        w.sets.push_back(std::move(eq));
    }
    w.pairwise_disjoint = true;
    for (std::size_t i = 0; i < w.sets.size() && w.pairwise_disjoint; ++i)
        for (std::size_t j = i + 1; j < w.sets.size(); ++j)
            if (!interval_lists_disjoint(w.sets[i], w.sets[j])) {
                w.pairwise_disjoint = false;
                break;
            }
    // easy direction of the lemma: carleson <= 1/eta, exactly
    const CarlesonResult carl = carleson_constant(family);
    // carl.exact <= 1/eta  <=>  carl.exact * eta <= 1
    const Dyadic2 c = carl.exact.normalized();
    // c * eta <= 1  <=>  c.num * eta.num * 2^c.exp <= eta.den
    long long lhs_num = c.num * w.eta_achieved.num;
    long long rhs_num = w.eta_achieved.den;
    if (c.exp >= 0) lhs_num <<= c.exp;
    else rhs_num <<= (-c.exp);
    w.lemma_easy_direction = lhs_num <= rhs_num;
    return w;
}

// ---------------------------------------------------------------------------
// Stopping time
// ---------------------------------------------------------------------------

double measure_weak_constant(const GridFunction& f, double s, int M) {
    // chi-weighted dyadic maximal function of |f|^s over the grid universe
    const auto universe = interval_universe(f);
    std::vector<double> maximal(f.size(), 0.0);
    for (const auto& Q : universe) {
        const double a = std::pow(lp_average(f, Q, s, M), s);
        const auto first = static_cast<std::size_t>(
            std::max(0.0, std::ceil((Q.lower() - f.origin()) / f.step() - 1e-12)));
        for (std::size_t i = first; i < f.size() && f.x(i) < Q.upper(); ++i)
            maximal[i] = std::max(maximal[i], a);
    }
    std::vector<double> mass(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) mass[i] = std::pow(std::abs(f[i]), s);
    const double total = f.step() * pairwise_sum(mass);
    if (total == 0.0) return 1.0;

    std::vector<double> sorted = maximal;
    std::sort(sorted.begin(), sorted.end());
    double best = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double lambda = sorted[i];
        if (lambda <= 0.0) continue;
        const double measure = f.step() * static_cast<double>(sorted.size() - i);
        best = std::max(best, lambda * measure / total);
    }
    return std::max(best, 1.0);
}

double auto_stopping_constant(std::span<const GridFunction> f, const StoppingConfig& cfg) {
    double sum_c = 0.0;
    double smin = cfg.s.empty() ? 1.0 : cfg.s[0];
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double sj = cfg.s[j];
        smin = std::min(smin, sj);
        sum_c += measure_weak_constant(f[j], sj, cfg.M - 1);
    }
    return std::pow(2.0 * sum_c, 1.0 / smin);
}

namespace {

struct StopContext {
    const MultiTileCollection& coll;
    std::span<const GridFunction> f;
    const StoppingConfig& cfg;
    double C;
    int finest_scale;
    SparseFamily* out;
};

// children of Q0: maximal dyadic Q strictly inside Q0, holding some tile
// interval, with a violating localized average for some j
std::vector<DyadicInterval> select_children(StopContext& ctx, const DyadicInterval& Q0,
                                            const std::vector<std::size_t>& stock) {
    std::vector<double> parent_ave(ctx.f.size());
    for (std::size_t j = 0; j < ctx.f.size(); ++j)
        parent_ave[j] = lp_average(ctx.f[j], Q0, ctx.cfg.s[j], ctx.cfg.M - 1);

    std::vector<DyadicInterval> violating;
    for (const DyadicInterval& Q : dyadic_subintervals(Q0, ctx.finest_scale)) {
        if (Q == Q0) continue;
        bool holds_tile = false;
        for (std::size_t t : stock)
            if (Q.contains(ctx.coll[t].space)) { holds_tile = true; break; }
        if (!holds_tile) continue;
        for (std::size_t j = 0; j < ctx.f.size(); ++j) {
            if (lp_average(ctx.f[j], Q, ctx.cfg.s[j], ctx.cfg.M) > ctx.C * parent_ave[j]) {
                violating.push_back(Q);
                break;
            }
        }
    }
    // keep the maximal violating intervals
    std::vector<DyadicInterval> children;
    for (const auto& Q : violating) {
        bool covered = false;
        for (const auto& R : violating)
            if (!(R == Q) && R.contains(Q)) { covered = true; break; }
        if (!covered) children.push_back(Q);
    }
    return children;
}

void recurse(StopContext& ctx, const DyadicInterval& Q0, std::vector<std::size_t> stock,
             int level, std::optional<std::size_t> parent) {
    if (level > ctx.cfg.max_depth) throw NonterminatingRecursion();
    const auto children = select_children(ctx, Q0, stock);

    SparseEntry entry;
    entry.interval = Q0;
    entry.level = level;
    entry.parent = parent;

    std::vector<std::vector<std::size_t>> child_stock(children.size());
    for (std::size_t t : stock) {
        bool in_child = false;
        for (std::size_t c = 0; c < children.size(); ++c) {
            if (children[c].contains(ctx.coll[t].space)) {
                child_stock[c].push_back(t);
                in_child = true;
                break;
            }
        }
        if (!in_child) entry.tiles.push_back(t);
    }
    ctx.out->entries.push_back(std::move(entry));
    const std::size_t my_index = ctx.out->entries.size() - 1;
    for (std::size_t c = 0; c < children.size(); ++c)
        recurse(ctx, children[c], std::move(child_stock[c]), level + 1, my_index);
}

} // namespace

SparseFamily build_sparse_collection(const MultiTileCollection& coll,
                                     std::span<const GridFunction> f, StoppingConfig cfg) {
    if (cfg.s.size() != f.size()) throw BadConfig("stopping config: one exponent per function");
    SparseFamily out;
    if (coll.empty()) {
        out.eta_witnessed = Rational{1, 1};
        return out;
    }
    for (std::size_t j = 1; j < f.size(); ++j)
        if (!f[0].same_grid(f[j])) throw GridMismatch();

    out.C_used = cfg.C > 0.0 ? cfg.C : auto_stopping_constant(f, cfg);

    // level 0: maximal intervals among the tile intervals
    std::vector<DyadicInterval> spaces;
    for (const auto& P : coll) spaces.push_back(P.space);
    std::vector<DyadicInterval> roots;
    for (const auto& I : spaces) {
        bool covered = false;
        for (const auto& J : spaces)
            if (!(J == I) && J.contains(I)) { covered = true; break; }
        if (!covered) roots.push_back(I);
    }
    std::sort(roots.begin(), roots.end(), [](const DyadicInterval& a, const DyadicInterval& b) {
        return Dyadic2{a.index, a.scale} < Dyadic2{b.index, b.scale};
    });
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());

    int finest = coll.front().space.scale;
    for (const auto& P : coll) finest = std::min(finest, P.space.scale);

    StopContext ctx{coll, f, cfg, out.C_used, finest, &out};
    for (const auto& root : roots) {
        std::vector<std::size_t> stock;
        for (std::size_t t = 0; t < coll.size(); ++t)
            if (root.contains(coll[t].space)) stock.push_back(t);
        recurse(ctx, root, std::move(stock), 0, std::nullopt);
    }

    std::sort(out.entries.begin(), out.entries.end(), [](const SparseEntry& a, const SparseEntry& b) {
        if (a.level != b.level) return a.level < b.level;
        return Dyadic2{a.interval.index, a.interval.scale} < Dyadic2{b.interval.index, b.interval.scale};
    });

    const auto intervals = out.intervals();
    out.eta_witnessed = sparse_eta(intervals).exact;
    out.carleson = carleson_constant(intervals).value;
    return out;
}

std::vector<DyadicInterval> SparseFamily::intervals() const {
    std::vector<DyadicInterval> v;
    v.reserve(entries.size());
    for (const auto& e : entries) v.push_back(e.interval);
    return v;
}

double sparse_rhs(const SparseFamily& S, std::span<const GridFunction> f,
                  std::span<const double> s, double q, int M) {
    if (s.size() != f.size()) throw BadConfig("sparse_rhs: one exponent per function");
    std::vector<double> terms;
    terms.reserve(S.entries.size());
    for (const auto& e : S.entries) {
        double prod = e.interval.length();
        for (std::size_t j = 0; j < f.size(); ++j)
            prod *= std::pow(lp_average(f[j], e.interval, s[j], M), q);
        terms.push_back(prod);
    }
    return pairwise_sum(terms);
}

std::string sparse_family_json(const SparseFamily& S) {
    nlohmann::ordered_json j;
    j["entries"] = nlohmann::ordered_json::array();
    for (const auto& e : S.entries) {
        j["entries"].push_back({{"interval", {{"k", e.interval.scale}, {"n", e.interval.index}}},
                                {"numTiles", e.tiles.size()},
                                {"level", e.level}});
    }
    j["eta"] = S.eta_witnessed.to_double();
    j["carleson"] = S.carleson;
    return j.dump();
}

// ---------------------------------------------------------------------------
// Level sets
// ---------------------------------------------------------------------------

std::vector<LevelSet> level_set_decompose(const GridFunction& f) {
    std::map<int, std::vector<std::size_t>> levels;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double a = std::abs(f[i]);
        if (a == 0.0) continue;
        int e = 0;
        const double m = std::frexp(a, &e); // a = m 2^e, m in [0.5, 1)
        const int k = (m == 0.5) ? e - 1 : e; // 2^{k-1} < a <= 2^k
        levels[k].push_back(i);
    }
    std::vector<LevelSet> out;
    for (auto& [k, idx] : levels) {
        LevelSet ls;
        ls.k = k;
        ls.F = std::move(idx);
        ls.f_k = GridFunction::zeros(f.origin(), f.step(), f.size());
        const double scale = std::ldexp(1.0, -k); // exact
        for (std::size_t i : ls.F) ls.f_k[i] = f[i] * scale;
        out.push_back(std::move(ls));
    }
    return out;
}

RestrictedToGeneralReport restricted_to_general_check(const GridFunction& f,
                                                      const MultiTileCollection& coll,
                                                      const DyadicInterval& I0, double alpha,
                                                      double p, int M) {
    const LocalizedCollection local = localize(coll, I0);
    RestrictedToGeneralReport rep;
    const auto levels = level_set_decompose(f);
    std::vector<double> terms;
    terms.reserve(levels.size());
    for (const auto& ls : levels) {
        GridFunction indicator = GridFunction::zeros(f.origin(), f.step(), f.size());
        for (std::size_t i : ls.F) indicator[i] = 1.0;
        const double sz = size_lp_plus(indicator, coll, local, 1.0, M).value;
        terms.push_back(std::ldexp(1.0, ls.k) * std::pow(sz, alpha));
    }
    rep.lhs = pairwise_sum(terms);
    rep.rhs = size_lp_plus(f, coll, local, p, M - 1).value;
    rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
    return rep;
}

// ---------------------------------------------------------------------------
// Alpha tuples
// ---------------------------------------------------------------------------

namespace {
void k_tuples(int m, int k, std::vector<std::vector<int>>& out) {
    std::vector<int> cur(static_cast<std::size_t>(k));
    auto rec = [&](auto&& self, int start, int depth) -> void {
        if (depth == k) { out.push_back(cur); return; }
        for (int i = start; i < m; ++i) {
            cur[static_cast<std::size_t>(depth)] = i;
            self(self, i + 1, depth + 1);
        }
    };
    rec(rec, 0, 0);
}
} // namespace

AlphaTuple alpha_tuple(int n, int k, const std::vector<Rational>& thetas) {
    if (2 * k >= n + 1) throw RankTooLarge();
    if (k < 1) throw BadConfig("alpha_tuple: k must be >= 1");
    AlphaTuple t;
    t.n = n;
    t.k = k;
    k_tuples(n + 1, k, t.tuples);
    if (thetas.size() != t.tuples.size()) throw BadThetaSum("theta count mismatch");
    Rational sum{0, 1};
    for (const auto& th : thetas) sum = sum + th;
    if (!(sum == Rational{1, 1})) throw BadThetaSum();
    t.thetas = thetas;
    t.alphas.assign(static_cast<std::size_t>(n + 1), Rational{0, 1});
    for (std::size_t i = 0; i < t.tuples.size(); ++i)
        for (int j : t.tuples[i])
            t.alphas[static_cast<std::size_t>(j)] = t.alphas[static_cast<std::size_t>(j)] + thetas[i];
    t.feasible = true;
    for (const auto& a : t.alphas)
        if (!(a < Rational{1, 2})) t.feasible = false;
    return t;
}

AlphaTuple alpha_tuple_uniform(int n, int k) {
    std::vector<std::vector<int>> tuples;
    k_tuples(n + 1, k, tuples);
    const long long count = static_cast<long long>(tuples.size());
    return alpha_tuple(n, k, std::vector<Rational>(tuples.size(), Rational{1, count}));
}

// ---------------------------------------------------------------------------
// Size-level stopping time
// ---------------------------------------------------------------------------

LevelStoppingResult level_stopping_time(const GridFunction& f, const MultiTileCollection& coll,
                                        int M) {
    LevelStoppingResult out;
    std::vector<std::size_t> stock;
    for (std::size_t i = 0; i < coll.size(); ++i) stock.push_back(i);

    const double l1 = f.norm_l1();
    const DyadicInterval root = grid_root(f);

    auto bracket_of = [](double a) {
        // n with 2^{-n-1} < a <= 2^{-n}
        int e = 0;
        const double m = std::frexp(a, &e);
        return (m == 0.5) ? -(e - 1) : -e;
    };

    while (!stock.empty()) {
        // averages of the remaining tiles
        std::vector<double> ave(stock.size());
        double smax = 0.0;
        for (std::size_t s = 0; s < stock.size(); ++s) {
            ave[s] = lp_average(f, coll[stock[s]].space, 1.0, M);
            smax = std::max(smax, ave[s]);
        }
        if (smax == 0.0) break; // f vanishes on every remaining tile: no levels
        const int n = bracket_of(smax);
        const double lo = std::ldexp(1.0, -n - 1), hi = std::ldexp(1.0, -n);

        // the current bracket's tiles
        std::vector<std::size_t> P_n;
        for (std::size_t s = 0; s < stock.size(); ++s)
            if (ave[s] > lo && ave[s] <= hi) P_n.push_back(stock[s]);
        if (P_n.empty()) throw NonterminatingRecursion("empty bracket at the maximal size");

        // maximal dyadic intervals containing some bracket tile and obeying
        // the bracket themselves; the tile interval itself always qualifies
        std::vector<DyadicInterval> candidates;
        std::set<DyadicInterval> seen;
        for (std::size_t t : P_n) {
            DyadicInterval I = coll[t].space;
            while (true) {
                if (seen.insert(I).second) {
                    const double a = lp_average(f, I, 1.0, M);
                    if (a > lo && a <= hi) candidates.push_back(I);
                }
                if (I.scale >= root.scale || !root.contains(I.parent())) break;
                I = I.parent();
            }
        }
        std::vector<DyadicInterval> maximal;
        for (const auto& I : candidates) {
            bool covered = false;
            for (const auto& J : candidates)
                if (!(J == I) && J.contains(I)) { covered = true; break; }
            if (!covered) maximal.push_back(I);
        }
        std::sort(maximal.begin(), maximal.end(),
                  [](const DyadicInterval& a, const DyadicInterval& b) {
                      return Dyadic2{a.index, a.scale} < Dyadic2{b.index, b.scale};
                  });

        SizeLevel level;
        level.n = n;
        std::set<std::size_t> taken;
        for (const auto& I : maximal) {
            std::vector<std::size_t> assigned;
            for (std::size_t t : stock)
                if (!taken.count(t) && I.contains(coll[t].space)) {
                    assigned.push_back(t);
                    taken.insert(t);
                }
            if (assigned.empty()) continue;
            level.intervals.push_back(I);
            level.tiles.push_back(std::move(assigned));
            level.sum_lengths += I.length();
        }
        if (level.intervals.empty()) throw NonterminatingRecursion("level selected no intervals");
        level.weak_constant =
            l1 > 0.0 ? level.sum_lengths / (std::ldexp(1.0, n) * l1) : 0.0;
        out.levels.push_back(std::move(level));

        std::vector<std::size_t> next;
        for (std::size_t t : stock)
            if (!taken.count(t)) next.push_back(t);
        stock = std::move(next);
    }

    std::vector<DyadicInterval> all;
    for (const auto& lvl : out.levels)
        for (const auto& I : lvl.intervals) all.push_back(I);
    if (!all.empty()) out.kappa = carleson_constant(all).value;
    return out;
}

// ---------------------------------------------------------------------------
// Local estimate check
// ---------------------------------------------------------------------------

LocalEstimateReport local_estimate_check(
    const std::function<cplx(const std::vector<std::size_t>&)>& form_on_subset,
    const MultiTileCollection& coll, const DyadicInterval& I0,
    std::span<const GridFunction> majorants, std::span<const double> alphas, int M) {
    if (majorants.size() != alphas.size())
        throw BadConfig("local_estimate_check: one alpha per majorant");
    const LocalizedCollection local = localize(coll, I0);
    LocalEstimateReport rep;
    rep.lhs = std::abs(form_on_subset(local.inside));
    double prod = I0.length();
    for (std::size_t j = 0; j < majorants.size(); ++j) {
        const double sz = size_lp_plus(majorants[j], coll, local, 1.0, M).value;
        prod *= std::pow(sz, 1.0 - alphas[j]);
    }
    rep.rhs_product = prod;
    rep.ratio = prod > 0.0 ? rep.lhs / prod : 0.0;
    return rep;
}

LocalEstimateReport local_estimate_check_model(const MultiTileCollection& coll,
                                               PacketProvider& packets,
                                               const DyadicInterval& I0,
                                               std::span<const GridFunction> f,
                                               std::span<const GridFunction> majorants,
                                               std::span<const double> alphas, int M) {
    return local_estimate_check(
        [&](const std::vector<std::size_t>& subset) {
            if (subset.empty()) return cplx{0.0, 0.0};
            return model_form(coll, packets, f, &subset);
        },
        coll, I0, majorants, alphas, M);
}

} // namespace sparselab
