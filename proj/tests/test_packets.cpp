#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sparselab/fft.hpp"
#include "sparselab/packets.hpp"

using namespace sparselab;

namespace {
const GridSpec kGrid{0.0, 1.0 / 64.0, 1 << 10}; // [0,16), Nyquist 32
}

TEST_CASE("bump profile shape") {
    const BumpProfile b = build_bump(0.9, 8);
    CHECK(b.eval(0.0) == 1.0);
    CHECK(b.eval(0.45) == 0.0);
    CHECK(b.eval(-0.45) == 0.0);
    CHECK(b.eval(0.5) == 0.0);
    for (double u : {0.05, 0.17, 0.31, 0.44}) {
        CHECK(b.eval(u) == b.eval(-u));
        CHECK(b.eval(u) >= 0.0);
        CHECK(b.eval(u) <= 1.0);
    }
    const auto samples = b.sample(64);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double u = -0.5 + (static_cast<double>(i) + 0.5) / 64.0;
        if (std::fabs(u) >= 0.45) CHECK(samples[i] == 0.0);
    }
    CHECK_THROWS_AS(build_bump(1.5, 4), BadConfig);
}

TEST_CASE("wave packet is L2 normalized with exact frequency support") {
    const BumpProfile b = build_bump(0.9, 8);
    const Tile unit{{0, 3}, {0, 1}}; // I = [3,4), w = [1,2)
    const WavePacket wp = wave_packet(unit, b, kGrid);
    CHECK(wp.samples.norm_l2() == doctest::Approx(1.0).epsilon(1e-9));

    const Spectrum s = analyze(wp.samples);
    double inside = 0.0, outside = 0.0;
    const double lo = 1.0 + 0.05, hi = 2.0 - 0.05; // the central 9/10 of [1,2)
    for (std::size_t i = 0; i < s.coeff.size(); ++i) {
        const double xi = s.freq_of(i);
        const double mass = std::abs(s.coeff[i]);
        if (xi > lo - 1e-9 && xi < hi + 1e-9) inside += mass;
        else outside = std::max(outside, mass);
    }
    CHECK(inside > 0.0);
    CHECK(outside <= 1e-12 * (inside + outside)); // exact by construction, FFT roundoff only
}

TEST_CASE("packets with disjoint frequency cells are orthogonal") {
    const BumpProfile b = build_bump(0.9, 8);
    const WavePacket a = wave_packet({{0, 0}, {0, 1}}, b, kGrid);
    const WavePacket c = wave_packet({{0, 0}, {0, 2}}, b, kGrid);
    CHECK(std::abs(pair_inner(a.samples, c)) <= 1e-10);
}

TEST_CASE("near-orthogonality within a lacunary column") {
    const BumpProfile b = build_bump(0.9, 8);
    std::vector<WavePacket> col;
    for (long long n : {1, 2, -4, 5})
        col.push_back(wave_packet({{0, 2}, {0, n}}, b, kGrid));
    for (std::size_t i = 0; i < col.size(); ++i) {
        for (std::size_t j = 0; j < col.size(); ++j) {
            const cplx g = pair_inner(col[i].samples, col[j]);
            if (i == j) CHECK(std::abs(g - cplx{1.0, 0.0}) <= 1e-9);
            else CHECK(std::abs(g) <= 1e-9);
        }
    }
}

TEST_CASE("pair is conjugate-linear and normalized") {
    const BumpProfile b = build_bump(0.9, 8);
    const WavePacket wp = wave_packet({{0, 1}, {0, 2}}, b, kGrid);
    CHECK(std::abs(pair_inner(wp.samples, wp) - cplx{1.0, 0.0}) <= 1e-9);

    GridFunction f = kGrid.zeros(), g = kGrid.zeros();
    for (std::size_t i = 0; i < f.size(); ++i) {
        f[i] = cplx(std::sin(0.01 * static_cast<double>(i)), 0.2);
        g[i] = cplx(0.3, std::cos(0.02 * static_cast<double>(i)));
    }
    GridFunction sum = f;
    sum += g;
    const cplx lhs = pair_inner(sum, wp);
    const cplx rhs = pair_inner(f, wp) + pair_inner(g, wp);
    CHECK(std::abs(lhs - rhs) <= 1e-12);

    GridFunction other = GridFunction::zeros(1.0, kGrid.step, kGrid.count);
    CHECK_THROWS_AS(pair_inner(other, wp), GridMismatch);
}

TEST_CASE("affine covariance: the doubled tile on the doubled grid is the exact dilation") {
    const BumpProfile b = build_bump(0.9, 8);
    const Tile unit{{0, 0}, {0, 1}};
    const Tile doubled{{1, 0}, {-1, 1}}; // the image of `unit` under x -> 2x

    const GridSpec fine{0.0, kGrid.step, kGrid.count};
    const GridSpec coarse{0.0, 2.0 * kGrid.step, kGrid.count};
    const WavePacket phi1 = wave_packet(unit, b, fine);
    const WavePacket phi2 = wave_packet(doubled, b, coarse);

    // phi2(2x) = 2^{-1/2} phi1(x) sample by sample
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < phi1.samples.size(); i += 13)
        CHECK(std::abs(phi2.samples[i] - inv_sqrt2 * phi1.samples[i]) <= 1e-12);
}

TEST_CASE("verify_adaptation: finite constants, monotone in M, scale invariant") {
    const BumpProfile b = build_bump(0.9, 8);
    const WavePacket wp = wave_packet({{0, 4}, {0, 1}}, b, kGrid);
    const auto table = verify_adaptation(wp, 2, 4);
    REQUIRE(table.size() == 3);
    REQUIRE(table[0].size() == 5);
    // C_{0,0} = |I|^{1/2} sup|phi|
    CHECK(table[0][0] == doctest::Approx(wp.samples.sup_abs()).epsilon(1e-12));
    for (std::size_t k = 0; k < table.size(); ++k) {
        for (std::size_t m = 0; m < table[k].size(); ++m) {
            CHECK(std::isfinite(table[k][m]));
            if (m > 0) CHECK(table[k][m] >= table[k][m - 1]);
        }
    }

    // the dyadic dilation image reports the same constants
    const GridSpec coarse{0.0, 2.0 * kGrid.step, kGrid.count};
    const WavePacket wp2 = wave_packet({{1, 4}, {-1, 1}}, b, coarse);
    const auto table2 = verify_adaptation(wp2, 2, 4);
    for (std::size_t k = 0; k < table.size(); ++k)
        for (std::size_t m = 0; m < table[k].size(); ++m)
            CHECK(table2[k][m] == doctest::Approx(table[k][m]).epsilon(1e-6));
}

TEST_CASE("generate_rank1_family respects capacity and validates") {
    CHECK_THROWS_AS(generate_rank1_family(9, 4, kGrid), CapacityExceeded);
    const MultiTileCollection coll = generate_rank1_family(4, 8, kGrid);
    CHECK(validate_rank(coll, 1).valid);
    // the frequency law is affine in the first component
    for (const MultiTile& P : coll) {
        CHECK(P.freqs[1].index == P.freqs[0].index + 1);
        CHECK(P.freqs[2].index == -2 * P.freqs[0].index - 2);
    }
}

TEST_CASE("packet cache returns stable references") {
    PacketProvider packets(build_bump(0.9, 8), kGrid);
    const MultiTileCollection coll = generate_rank1_family(2, 3, kGrid);
    packets.build_all(coll);
    const WavePacket& a = packets.get(coll[0], 0);
    const WavePacket& b = packets.get(coll[0], 0);
    CHECK(&a == &b);
}
