#include "sparselab/suite.hpp"

#include <cmath>

#include "sparselab/errors.hpp"

namespace sparselab {

SuiteKind suite_kind_from_string(const std::string& s) {
    if (s == "restrictedSets") return SuiteKind::restrictedSets;
    if (s == "staircases") return SuiteKind::staircases;
    if (s == "randomSteps") return SuiteKind::randomSteps;
    if (s == "powerWeights") return SuiteKind::powerWeights;
    if (s == "vectorFamilies") return SuiteKind::vectorFamilies;
    throw BadConfig("unknown suite kind: " + s);
}

std::string to_string(SuiteKind k) {
    switch (k) {
        case SuiteKind::restrictedSets: return "restrictedSets";
        case SuiteKind::staircases: return "staircases";
        case SuiteKind::randomSteps: return "randomSteps";
        case SuiteKind::powerWeights: return "powerWeights";
        case SuiteKind::vectorFamilies: return "vectorFamilies";
    }
    return "?";
}

std::uint64_t SuiteRng::next() {
    // splitmix64: fixed sequence, no library distribution involved
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double SuiteRng::u01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

long long SuiteRng::uniform(long long lo, long long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<long long>(next() % span);
}

namespace {

int grid_root_scale(const GridSpec& grid) {
    int e = 0;
    std::frexp(grid.length(), &e);
    return e - 1;
}

// indicator of a union of dyadic pieces inside `window`, so the functions of
// one case interact instead of sitting in far-apart tails
GridFunction indicator_union(SuiteRng& rng, const DyadicInterval& window, const GridSpec& grid,
                             int max_pieces) {
    GridFunction f = grid.zeros();
    const long long n_pieces = rng.uniform(1, max_pieces);
    for (long long p = 0; p < n_pieces; ++p) {
        const int k = static_cast<int>(rng.uniform(-4, std::min(1, window.scale - 1)));
        const double len = std::ldexp(1.0, k);
        const long long slots = static_cast<long long>(window.length() / len);
        const long long pos = rng.uniform(0, slots - 1);
        const double lo = window.lower() + static_cast<double>(pos) * len;
        for (std::size_t i = 0; i < f.size(); ++i)
            if (f.x(i) >= lo && f.x(i) < lo + len) f[i] = 1.0;
    }
    return f;
}

GridFunction staircase(const GridSpec& grid, int levels) {
    // equal dyadic blocks, value 2^{-j} on block j (1-based), inside [origin, origin+L)
    GridFunction f = grid.zeros();
    const std::size_t block = f.size() / static_cast<std::size_t>(2 * levels);
    for (int j = 1; j <= levels; ++j) {
        const std::size_t lo = static_cast<std::size_t>(j - 1) * block;
        for (std::size_t i = lo; i < lo + block && i < f.size(); ++i)
            f[i] = std::ldexp(1.0, -j);
    }
    return f;
}

GridFunction random_steps(SuiteRng& rng, const GridSpec& grid) {
    GridFunction f = grid.zeros();
    const int k = static_cast<int>(rng.uniform(-5, -2));
    const std::size_t block = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ldexp(1.0, k) / grid.step));
    double value = rng.u01();
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (i % block == 0) value = rng.u01();
        f[i] = value;
    }
    return f;
}

} // namespace

std::vector<SuiteCase> generate_suite(std::uint64_t seed, SuiteKind kind, int cases,
                                      const GridSpec& grid, int n_functions, double vector_r,
                                      int vector_components) {
    SuiteRng rng(seed);
    std::vector<SuiteCase> out;
    out.reserve(static_cast<std::size_t>(cases));
    for (int c = 0; c < cases; ++c) {
        SuiteCase sc;
        switch (kind) {
            case SuiteKind::restrictedSets: {
                // shared window: a quarter of the grid, dyadically placed
                const int wk = std::max(grid_root_scale(grid) - 2, -1);
                const long long wslots = 1LL << (grid_root_scale(grid) - wk);
                sc.window = DyadicInterval{wk, rng.uniform(0, wslots - 1)};
                for (int j = 0; j < n_functions; ++j)
                    sc.functions.push_back(indicator_union(rng, sc.window, grid, 4));
                break;
            }
            case SuiteKind::staircases: {
                sc.staircase_levels = static_cast<int>(rng.uniform(4, 16));
                sc.functions.push_back(staircase(grid, sc.staircase_levels));
                break;
            }
            case SuiteKind::randomSteps:
                for (int j = 0; j < n_functions; ++j)
                    sc.functions.push_back(random_steps(rng, grid));
                break;
            case SuiteKind::powerWeights: {
                const double a = -0.5 + 2.0 * rng.u01();
                sc.weights.push_back(weight_power(grid.zeros(), a, 0.0));
                break;
            }
            case SuiteKind::vectorFamilies: {
                for (int j = 0; j < n_functions; ++j) {
                    VectorFunction vf;
                    vf.r = vector_r;
                    for (int k = 0; k < vector_components; ++k)
                        vf.components.push_back(random_steps(rng, grid));
                    // normalize: pointwise l^r mass at most 1
                    for (std::size_t i = 0; i < vf.components[0].size(); ++i) {
                        double mass = 0.0;
                        for (const auto& comp : vf.components)
                            mass += abs_pow(comp[i], vector_r);
                        const double nrm = abs_pow(mass, 1.0 / vector_r);
                        if (nrm > 1.0)
                            for (auto& comp : vf.components) comp[i] /= nrm;
                    }
                    sc.vectors.push_back(std::move(vf));
                }
                break;
            }
        }
        out.push_back(std::move(sc));
    }
    return out;
}

} // namespace sparselab
