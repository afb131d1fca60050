#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sparselab/operators.hpp"
#include "sparselab/suite.hpp"
#include "sparselab/weights.hpp"

using namespace sparselab;

namespace {

const GridSpec kGrid{0.0, 1.0 / 64.0, 1 << 10}; // [0,16)

GridFunction constant(double c) {
    GridFunction f = kGrid.zeros();
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = c;
    return f;
}

GridFunction indicator(double lo, double hi) {
    GridFunction f = kGrid.zeros();
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f.x(i) >= lo && f.x(i) < hi) f[i] = 1.0;
    return f;
}

} // namespace

TEST_CASE("multilinear maximal on constants and indicators") {
    const auto universe = interval_universe(kGrid.zeros());

    // constants: the product of the constants everywhere
    std::vector<GridFunction> fs{constant(2.0), constant(3.0)};
    const std::vector<double> s{1.0, 2.0};
    const GridFunction m = multilinear_maximal(fs, s, universe);
    for (std::size_t i = 0; i < m.size(); i += 31)
        CHECK(m[i].real() == doctest::Approx(6.0).epsilon(1e-12));

    // n=1: f = 1_{[0,1)}, at x = 2.5 the best dyadic interval is [0,4)
    std::vector<GridFunction> one{indicator(0.0, 1.0)};
    const std::vector<double> s1{1.0};
    const GridFunction m1 = multilinear_maximal(one, s1, universe);
    const std::size_t at = static_cast<std::size_t>(2.5 / kGrid.step);
    CHECK(m1[at].real() == doctest::Approx(0.25).epsilon(1e-12));

    // equal slots square the single maximal function
    std::vector<GridFunction> twin{indicator(0.0, 1.0), indicator(0.0, 1.0)};
    const std::vector<double> s2{1.0, 1.0};
    const GridFunction m2 = multilinear_maximal(twin, s2, universe);
    for (std::size_t i = 0; i < m2.size(); i += 17)
        CHECK(m2[i].real() == doctest::Approx(m1[i].real() * m1[i].real()).epsilon(1e-12));

    // dominated by the product of single maximal functions
    std::vector<GridFunction> mixed{indicator(0.0, 2.0), indicator(1.0, 5.0)};
    const GridFunction mm = multilinear_maximal(mixed, s2, universe);
    const GridFunction ma = multilinear_maximal({mixed.data(), 1}, {s2.data(), 1}, universe);
    const GridFunction mb = multilinear_maximal({mixed.data() + 1, 1}, {s2.data() + 1, 1}, universe);
    for (std::size_t i = 0; i < mm.size(); i += 13)
        CHECK(mm[i].real() <= ma[i].real() * mb[i].real() * (1 + 1e-12));
}

TEST_CASE("ap characteristic closed forms") {
    const auto universe = interval_universe(kGrid.zeros());
    const WeightFunction one = weight_one(kGrid.zeros());
    CHECK(ap_characteristic(one, 2.0, universe) == 1.0);
    CHECK(ap_characteristic(one, 1.5, universe) == 1.0);

    // two-valued dyadic step on [0,1): finite enumeration oracle
    WeightFunction w = weight_one(kGrid.zeros());
    for (std::size_t i = 0; i < w.values.size(); ++i)
        w.values[i] = (w.values.x(i) < 0.5) ? 1.0 : 2.0;
    const double p = 2.0;
    double oracle = 0.0;
    for (const DyadicInterval& Q : universe) {
        double avg = 0.0, dual = 0.0;
        std::size_t cnt = 0;
        for (std::size_t i = 0; i < w.values.size(); ++i) {
            const double x = w.values.x(i);
            if (x >= Q.lower() && x < Q.upper()) {
                avg += w.values[i].real();
                dual += 1.0 / w.values[i].real();
                ++cnt;
            }
        }
        avg /= static_cast<double>(cnt);
        dual /= static_cast<double>(cnt);
        oracle = std::max(oracle, avg * dual);
    }
    CHECK(ap_characteristic(w, p, universe) == doctest::Approx(oracle).epsilon(1e-12));

    WeightFunction vanish = one;
    vanish.values[7] = 0.0;
    CHECK_THROWS_AS(ap_characteristic(vanish, 2.0, universe), WeightVanishes);
}

TEST_CASE("ap characteristic nonincreasing in p") {
    SuiteRng rng(51);
    const auto universe = interval_universe(kGrid.zeros());
    for (int t = 0; t < 5; ++t) {
        WeightFunction w = weight_one(kGrid.zeros());
        for (std::size_t i = 0; i < w.values.size(); ++i) w.values[i] = 0.25 + rng.u01();
        double prev = 1e300;
        for (double p : {1.5, 2.0, 3.0}) {
            const double c = ap_characteristic(w, p, universe);
            CHECK(c <= prev * (1 + 1e-12));
            CHECK(c >= 1.0 - 1e-12);
            prev = c;
        }
    }
}

TEST_CASE("rh characteristic closed forms") {
    const auto universe = interval_universe(kGrid.zeros());
    CHECK(rh_characteristic(weight_one(kGrid.zeros()), 2.0, universe) == 1.0);

    // w = 1 on [0,1), eps elsewhere; over Q = [0,2) the ratio tends to 2^{1-1/s}
    const double eps = 1e-6, s = 2.0;
    WeightFunction w = weight_one(kGrid.zeros());
    for (std::size_t i = 0; i < w.values.size(); ++i)
        w.values[i] = (w.values.x(i) < 1.0) ? 1.0 : eps;
    const std::vector<DyadicInterval> just{DyadicInterval{1, 0}};
    CHECK(rh_characteristic(w, s, just) ==
          doctest::Approx(std::pow(2.0, 1.0 - 1.0 / s)).epsilon(1e-3));

    // Jensen: always >= 1
    SuiteRng rng(52);
    for (int t = 0; t < 5; ++t) {
        WeightFunction r = weight_one(kGrid.zeros());
        for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] = 0.1 + rng.u01();
        CHECK(rh_characteristic(r, 1.5, universe) >= 1.0 - 1e-12);
    }
}

TEST_CASE("vector A_{q,s} characteristic") {
    const auto universe = interval_universe(kGrid.zeros());

    VectorWeight ones;
    ones.w = {weight_one(kGrid.zeros()), weight_one(kGrid.zeros())};
    ones.q = {4.0, 4.0};
    const std::vector<double> s{2.0, 2.0};
    CHECK(vector_aqs_characteristic(ones, s, universe) == doctest::Approx(1.0).epsilon(1e-12));

    // n = 1 coincides with the two-weight expression computed independently
    VectorWeight single;
    single.w = {weight_power(kGrid.zeros(), 0.4, 0.0)};
    single.q = {4.0};
    const std::vector<double> s1{2.0};
    const double lhs = vector_aqs_characteristic(single, s1, universe);
    double oracle = 0.0;
    for (const DyadicInterval& Q : universe) {
        const double nu = interior_average_abs_pow(single.w[0].values, Q, 1.0);
        GridFunction dual = kGrid.zeros();
        for (std::size_t i = 0; i < dual.size(); ++i)
            dual[i] = std::pow(single.w[0].values[i].real(), -1.0);
        const double davg = interior_average_abs_pow(dual, Q, 1.0);
        oracle = std::max(oracle, std::pow(nu, 0.25) * std::pow(davg, 0.25));
    }
    CHECK(lhs == doctest::Approx(oracle).epsilon(1e-10));

    VectorWeight clash = ones;
    const std::vector<double> sbad{5.0, 2.0};
    CHECK_THROWS_AS(vector_aqs_characteristic(clash, sbad, universe), ExponentClash);
}

TEST_CASE("joint condition value") {
    const auto universe = interval_universe(kGrid.zeros());
    std::vector<WeightFunction> ones{weight_one(kGrid.zeros()), weight_one(kGrid.zeros())};
    const std::vector<double> q{4.0, 4.0};
    const std::vector<double> s{2.0, 2.0};
    CHECK(joint_condition_value(ones, q, s, 2.0, universe) == doctest::Approx(1.0).epsilon(1e-12));

    // q_j = infinity with a non-constant weight is rejected
    std::vector<WeightFunction> mixed{weight_power(kGrid.zeros(), 0.3, 0.0),
                                      weight_one(kGrid.zeros())};
    const std::vector<double> qinf{4.0, std::numeric_limits<double>::infinity()};
    CHECK_NOTHROW(joint_condition_value(mixed, qinf, s, 2.0, universe));
    std::vector<WeightFunction> bad{weight_one(kGrid.zeros()),
                                    weight_power(kGrid.zeros(), 0.3, 0.0)};
    CHECK_THROWS_AS(joint_condition_value(bad, qinf, s, 2.0, universe), BadConfig);
}

TEST_CASE("reverse Holder vector lemma: ones give equality at 1") {
    const auto universe = interval_universe(kGrid.zeros());
    VectorWeight ones;
    ones.w = {weight_one(kGrid.zeros()), weight_one(kGrid.zeros())};
    ones.q = {4.0, 4.0};
    const std::vector<double> beta_j{2.0, 3.0};
    const RhVectorLemmaReport rep = rh_vector_lemma_check(ones, 2.0, beta_j, universe);
    CHECK(rep.C == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.nu_at == doctest::Approx(1.0).epsilon(1e-12));
    for (double v : rep.w_atj) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.nu_bound);
    CHECK(rep.w_bounds);

    // t and t_j from independent rational arithmetic
    // t = 1 + beta (1/2 + 1/3) = 1 + 2*5/6 = 8/3
    CHECK(rep.t == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
    // t_1 = 1 + 2 (1/2 + 1/3) = 8/3 ; t_2 = 1 + 3 (1/2 + 1/2) = 4
    CHECK(rep.t_j[0] == doctest::Approx(1.0 + 2.0 * (0.5 + 1.0 / 3.0)).epsilon(1e-15));
    CHECK(rep.t_j[1] == doctest::Approx(1.0 + 3.0 * (0.5 + 0.5)).epsilon(1e-15));
}

TEST_CASE("reverse Holder vector lemma on a power weight, n = 1") {
    const auto universe = interval_universe(kGrid.zeros());
    VectorWeight vw;
    vw.w = {weight_power(kGrid.zeros(), 0.5, 0.0)};
    vw.q = {2.0};
    const std::vector<double> beta_j{2.0};
    const RhVectorLemmaReport rep = rh_vector_lemma_check(vw, 1.5, beta_j, universe);
    CHECK(std::isfinite(rep.C));
    // n = 1 makes the bound an identity up to Riemann roundoff
    CHECK(rep.nu_bound);
    CHECK(rep.w_bounds);
    CHECK(rep.nu_at <= std::pow(rep.C, 1.5) * (1 + 1e-6));
    CHECK(rep.nu_at >= std::pow(rep.C, 1.5) * (1 - 1e-6));
}

TEST_CASE("power weight doubling diagnostic fires exactly above the A_p window") {
    const GridSpec fine{0.0, 1.0 / 512.0, 1 << 12}; // [0,8)
    const GridFunction like = fine.zeros();
    for (double p : {1.5, 2.0, 3.0}) {
        for (double rel : {0.5, 0.75, 1.0, 1.25, 1.5}) {
            const double a = (p - 1.0) * rel;
            const DoublingDiagnostic d = power_weight_doubling_diagnostic(like, a, p, 10, 1.2);
            CHECK(d.fired == (rel >= 1.0));
        }
    }
}

TEST_CASE("fefferman_stein_ratio basics") {
    const WeightFunction v = weight_one(kGrid.zeros());
    const std::vector<double> s{2.0, 2.0};

    // zero inputs
    std::vector<GridFunction> zero{kGrid.zeros(), kGrid.zeros()};
    const FeffermanSteinReport z = fefferman_stein_ratio(kGrid.zeros(), zero, s, v, 1.0);
    CHECK(z.lhs == 0.0);
    CHECK(z.ratio == 0.0);

    // homogeneity: rescaling slot one by 4 leaves the ratio exactly invariant
    const GridSpec small{0.0, 1.0 / 16.0, 1 << 8};
    GridFunction f = small.zeros(), g = small.zeros();
    SuiteRng rng(53);
    for (std::size_t i = 0; i < f.size(); ++i) {
        f[i] = rng.u01() - 0.5;
        g[i] = rng.u01() - 0.5;
    }
    const WeightFunction vs = weight_one(small.zeros());
    const GridFunction out = bht_direct(f, g);
    GridFunction f4 = f;
    f4 *= 4.0;
    GridFunction out4 = bht_direct(f4, g);
    for (double q : {0.5, 1.0}) {
        const FeffermanSteinReport r1 =
            fefferman_stein_ratio(out, std::vector<GridFunction>{f, g}, s, vs, q);
        const FeffermanSteinReport r4 =
            fefferman_stein_ratio(out4, std::vector<GridFunction>{f4, g}, s, vs, q);
        CHECK(r1.ratio == r4.ratio); // exact: every path scales by powers of two
        CHECK(std::isfinite(r1.ratio));
        CHECK(r1.ratio > 0.0);
    }
}
