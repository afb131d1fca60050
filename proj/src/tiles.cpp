#include "sparselab/tiles.hpp"

#include <fstream>
#include <functional>

#include <json.hpp>

#include "sparselab/errors.hpp"

namespace sparselab {

bool freq_in_dilate(const DyadicInterval& w, const DyadicInterval& w0, int c) {
    // c*w0 = [(2n+1-c) 2^{k-1}, (2n+1+c) 2^{k-1}) for w0 = [n 2^k, (n+1) 2^k).
    // Compare on the common lattice of scale min(k-1, kw).
    const int k0 = w0.scale - 1;
    const long long lo0 = 2 * w0.index + 1 - c;
    const long long hi0 = 2 * w0.index + 1 + c;
    const int kw = w.scale;
    const int e = std::min(k0, kw);
    const long long lo = w.index << (kw - e);
    const long long hi = (w.index + 1) << (kw - e);
    const long long dlo = lo0 << (k0 - e);
    const long long dhi = hi0 << (k0 - e);
    return dlo <= lo && hi <= dhi;
}

bool tile_lt(const Tile& a, const Tile& b) {
    return b.space.strictly_contains(a.space) && freq_in_dilate(b.freq, a.freq, 3);
}

bool tile_leq(const Tile& a, const Tile& b) {
    return a == b || tile_lt(a, b);
}

bool tile_lesssim(const Tile& a, const Tile& b) {
    return b.space.contains(a.space) && freq_in_dilate(b.freq, a.freq, 100);
}

bool tile_lesssim_prime(const Tile& a, const Tile& b) {
    return tile_lesssim(a, b) && !tile_leq(a, b);
}

TileRelation tile_order(const Tile& a, const Tile& b) {
    if (tile_lt(a, b)) return TileRelation::lt;
    if (a == b) return TileRelation::leq;
    if (tile_lesssim(a, b)) return TileRelation::lesssimPrime;
    return TileRelation::none;
}

std::string to_string(TileRelation r) {
    switch (r) {
        case TileRelation::none: return "none";
        case TileRelation::lesssimPrime: return "lesssimPrime";
        case TileRelation::lesssim: return "lesssim";
        case TileRelation::leq: return "leq";
        case TileRelation::lt: return "lt";
    }
    return "?";
}

LocalizedCollection localize(const MultiTileCollection& coll, const DyadicInterval& I0,
                             const std::optional<MultiTile>& top, std::size_t components) {
    LocalizedCollection out;
    for (std::size_t i = 0; i < coll.size(); ++i)
        if (I0.contains(coll[i].space)) out.inside.push_back(i);
    if (top) {
        if (!(top->space == I0)) throw BadConfig("localize: top spatial interval must equal I0");
        out.top = *top;
    } else {
        MultiTile t;
        t.space = I0;
        const std::size_t arity = coll.empty() ? components : coll.front().components();
        for (std::size_t j = 0; j < arity; ++j)
            t.freqs.push_back(DyadicInterval{-I0.scale, static_cast<long long>(j)});
        out.top = t;
    }
    return out;
}

namespace {

// enumerate ordered k-subsets (combinations) of {0..m-1}
void combinations(int m, int k, std::vector<std::vector<int>>& out) {
    std::vector<int> cur(static_cast<std::size_t>(k));
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == k) { out.push_back(cur); return; }
        for (int i = start; i < m; ++i) {
            cur[static_cast<std::size_t>(depth)] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
}

RankReport violation(std::size_t i, std::size_t j, int bullet, std::vector<int> tuple, std::string msg) {
    RankReport r;
    r.valid = false;
    r.violation = RankViolation{i, j, bullet, std::move(tuple), std::move(msg)};
    return r;
}

RankReport validate_rank0(const MultiTileCollection& coll) {
    // Rank 0: zero degrees of freedom in frequency. The multi-tile is a
    // function of its spatial interval, and the frequency data may depend on
    // the scale only.
    for (std::size_t i = 0; i < coll.size(); ++i) {
        for (std::size_t j = i + 1; j < coll.size(); ++j) {
            const auto& P = coll[i];
            const auto& Q = coll[j];
            if (P.space.scale != Q.space.scale) continue;
            // Same scale: frequencies must coincide (translation invariance).
            if (P.freqs != Q.freqs)
                return violation(i, j, 1, {}, "rank-0 tiles at equal scale carry different frequencies");
        }
    }
    return {};
}

} // namespace

RankReport validate_rank(const MultiTileCollection& coll, int k, int scale_gap) {
    for (std::size_t i = 0; i < coll.size(); ++i)
        if (!coll[i].well_formed())
            return violation(i, i, 0, {}, "multi-tile violates the area-one invariant");
    if (coll.empty()) return {};
    const int m = static_cast<int>(coll.front().components());
    for (std::size_t i = 0; i < coll.size(); ++i)
        if (static_cast<int>(coll[i].components()) != m)
            return violation(i, i, 0, {}, "inconsistent component counts");
    if (k < 0 || k > m) throw BadConfig("validate_rank: k out of range");
    if (k == 0) return validate_rank0(coll);

    std::vector<std::vector<int>> tuples;
    combinations(m, k, tuples);

    for (std::size_t ip = 0; ip < coll.size(); ++ip) {
        for (std::size_t iq = 0; iq < coll.size(); ++iq) {
            if (ip == iq) continue;
            const MultiTile& P = coll[ip];  // plays the larger tile
            const MultiTile& Pp = coll[iq]; // P'
            for (const auto& t : tuples) {
                // bullet one
                bool freq_equal = true;
                for (int s : t)
                    if (!(P.freqs[static_cast<std::size_t>(s)] == Pp.freqs[static_cast<std::size_t>(s)])) { freq_equal = false; break; }
                if (freq_equal) {
                    for (int c = 0; c < m; ++c)
                        if (!(P.freqs[static_cast<std::size_t>(c)] == Pp.freqs[static_cast<std::size_t>(c)]))
                            return violation(ip, iq, 1, t,
                                             "k equal components do not determine the rest");
                }
                // bullet two
                bool overl = true;
                for (int s : t)
                    if (!tile_leq(Pp.component(static_cast<std::size_t>(s)), P.component(static_cast<std::size_t>(s)))) { overl = false; break; }
                if (overl) {
                    for (int c = 0; c < m; ++c)
                        if (!tile_lesssim(Pp.component(static_cast<std::size_t>(c)), P.component(static_cast<std::size_t>(c))))
                            return violation(ip, iq, 2, t,
                                             "k overlapping components without full lesssim");
                    // bullet three, only when the scales are genuinely separated
                    if (Pp.space.scale <= P.space.scale - scale_gap) {
                        int prime = 0;
                        for (int c = 0; c < m; ++c)
                            if (tile_lesssim_prime(Pp.component(static_cast<std::size_t>(c)), P.component(static_cast<std::size_t>(c))))
                                ++prime;
                        if (prime < 2)
                            return violation(ip, iq, 3, t,
                                             "scale-separated overlapping pair with fewer than two lacunary components");
                    }
                }
            }
        }
    }
    return {};
}

void save_tile_family(const MultiTileCollection& coll, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IOFailure("cannot open " + path);
    for (const MultiTile& P : coll) {
        nlohmann::ordered_json j;
        j["space"] = {{"k", P.space.scale}, {"n", P.space.index}};
        j["freqs"] = nlohmann::ordered_json::array();
        for (const auto& w : P.freqs)
            j["freqs"].push_back({{"k", w.scale}, {"n", w.index}});
        os << j.dump() << "\n";
    }
    if (!os) throw IOFailure("write failed: " + path);
}

MultiTileCollection load_tile_family(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IOFailure("cannot open " + path);
    MultiTileCollection coll;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const std::exception& e) {
            throw IOFailure(std::string("bad tile-family line: ") + e.what());
        }
        MultiTile P;
        P.space = {j.at("space").at("k").get<int>(), j.at("space").at("n").get<long long>()};
        for (const auto& w : j.at("freqs"))
            P.freqs.push_back({w.at("k").get<int>(), w.at("n").get<long long>()});
        if (!P.well_formed())
            throw IOFailure("tile-family entry violates the area-one invariant");
        coll.push_back(std::move(P));
    }
    return coll;
}

} // namespace sparselab
