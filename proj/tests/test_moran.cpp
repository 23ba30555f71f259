#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "areal/error.hpp"
#include "areal/moran.hpp"
#include "areal/parallel.hpp"
#include "areal/rng.hpp"
#include "areal/synthetic.hpp"
#include "helpers.hpp"

using namespace areal;

namespace {

AttributeVector vec(std::vector<double> v) { return AttributeVector{"y", std::move(v)}; }

}  // namespace

TEST_CASE("global Moran: 2x2 rook checkerboard is exactly -1") {
    auto lattice = make_lattice(2, 2, Contiguity::rook);
    auto y = checkerboard(2, 2);
    const double I = moran_global(y, lattice.W);
    CHECK(std::fabs(I - (-1.0)) < 1e-12);
    CHECK(I == doctest::Approx(testutil::moran_brute_force(y.values, lattice.W)));
}

TEST_CASE("global Moran: constant attribute is rejected") {
    auto lattice = make_lattice(2, 2, Contiguity::rook);
    CHECK_THROWS_AS(moran_global(vec({3, 3, 3, 3}), lattice.W), DataError);
}

TEST_CASE("global Moran: two identical halves on a path graph") {
    // chain 0-1-2-3-4-5; direct evaluation over the 5 edges gives
    // (6/10) * (6/6) = 0.6
    auto units = testutil::units_from_points(
        {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}, {5, 0}});
    auto w = build_adjacency_edges(
        units, {{"u0", "u1"}, {"u1", "u2"}, {"u2", "u3"}, {"u3", "u4"}, {"u4", "u5"}});
    auto y = vec({1, 1, 1, -1, -1, -1});
    const double I = moran_global(y, w);
    CHECK(I == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(I == doctest::Approx(testutil::moran_brute_force(y.values, w)).epsilon(1e-12));
}

TEST_CASE("global Moran: length mismatch is rejected") {
    auto lattice = make_lattice(2, 2, Contiguity::rook);
    CHECK_THROWS_AS(moran_global(vec({1, 2, 3}), lattice.W), DataError);
}

TEST_CASE("global Moran is invariant under affine transforms of y") {
    auto lattice = make_lattice(4, 4, Contiguity::queen);
    auto y = iid_noise(16, 1.0, 7);
    const double base = moran_global(y, lattice.W);
    AttributeVector scaled = y;
    for (double& v : scaled.values) v = -2.5 * v + 17.0;
    CHECK(moran_global(scaled, lattice.W) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("global Moran differs between raw and standardized weights") {
    auto lattice = make_lattice(5, 5, Contiguity::rook);
    auto y = gradient(5, 5);
    const double raw = moran_global(y, lattice.W);
    const double std_ = moran_global(y, row_standardize(lattice.W));
    CHECK(std::fabs(raw - std_) > 1e-6);
}

TEST_CASE("null moments: expectation is -1/(n-1)") {
    // n = 529 wards: expectation -1/528
    auto units = testutil::units_from_points([] {
        std::vector<Point> pts;
        CounterRng rng(3);
        for (int i = 0; i < 529; ++i)
            pts.push_back({rng.uniform(2 * i), rng.uniform(2 * i + 1)});
        return pts;
    }());
    auto w = build_knn(units, 5, Metric::euclidean);
    auto y = iid_noise(529, 1.0, 11);
    for (auto scheme : {MoranScheme::normality, MoranScheme::randomization}) {
        const auto [e, v] = moran_null_moments(y, w, scheme);
        CHECK(e == doctest::Approx(-0.0018939).epsilon(1e-4));
        CHECK(e == doctest::Approx(-1.0 / 528.0).epsilon(1e-12));
        CHECK(v > 0.0);
    }
}

TEST_CASE("null moments: n = 2 boundary and n < 4 randomization guard") {
    auto units = testutil::units_from_points({{0, 0}, {1, 0}});
    auto w = build_adjacency_edges(units, {{"u0", "u1"}});
    auto y = vec({1.0, 2.0});
    const auto [e, v] = moran_null_moments(y, w, MoranScheme::normality);
    CHECK(e == doctest::Approx(-1.0));
    // with two units the closed form collapses to zero variance, and the
    // z test refuses the division
    CHECK(v == doctest::Approx(0.0));
    CHECK_THROWS_AS(moran_test(y, w, MoranScheme::normality, Alternative::two_sided), DataError);
    CHECK_THROWS_AS(moran_null_moments(y, w, MoranScheme::randomization), DataError);
}

TEST_CASE("randomization variance agrees with a permutation oracle") {
    auto lattice = make_lattice(4, 4, Contiguity::rook);
    auto y = iid_noise(16, 1.0, 99);
    const auto [e, v] = moran_null_moments(y, lattice.W, MoranScheme::randomization);

    // empirical oracle: the sample moments reported by a long permutation run
    const int m = 200000;
    const auto r = moran_permutation(y, lattice.W, m, 12345);
    // normal-theory SE of the variance estimate with slack for kurtosis
    const double se_var = v * std::sqrt(2.0 / (m - 1.0)) * 2.0;
    CHECK(std::fabs(r.variance - v) < 3.0 * se_var);
    CHECK(r.expectation == doctest::Approx(e).epsilon(0.05));
}

TEST_CASE("analytic Moran test: size calibration under the null") {
    // iid Gaussian fields on a 10x10 rook lattice; two-sided randomization
    // test at level 0.05 should reject about 5% of the time
    auto lattice = make_lattice(10, 10, Contiguity::rook);
    const int reps = 1000;
    std::vector<int> reject(reps, 0);
    parallel_for(0, reps, [&](int r) {
        auto y = iid_noise(100, 1.0, derive_seed(4242, r));
        const auto t = moran_test(y, lattice.W, MoranScheme::randomization,
                                  Alternative::two_sided);
        reject[r] = t.p_value <= 0.05 ? 1 : 0;
    });
    const double rate = std::accumulate(reject.begin(), reject.end(), 0) / 1000.0;
    CHECK(rate >= 0.03);
    CHECK(rate <= 0.07);
}

TEST_CASE("analytic Moran test: strong negative autocorrelation") {
    auto lattice = make_lattice(10, 10, Contiguity::rook);
    auto y = checkerboard(10, 10);
    const auto t = moran_test(y, lattice.W, MoranScheme::randomization, Alternative::less);
    CHECK(t.p_value < 0.001);
    CHECK(t.scheme == MoranScheme::randomization);
}

TEST_CASE("z = 0 gives two-sided p = 1") {
    CHECK(normal_p_value(0.0, Alternative::two_sided) == doctest::Approx(1.0));
    CHECK(normal_p_value(0.0, Alternative::greater) == doctest::Approx(0.5));
}

TEST_CASE("permutation test: counting formula at the extreme") {
    auto lattice = make_lattice(10, 10, Contiguity::rook);
    auto y = gradient(10, 10);
    const auto r = moran_permutation(y, lattice.W, 999, 7, Alternative::greater);
    // the observed I on a gradient exceeds every permuted value
    CHECK(r.p_value == doctest::Approx(0.001));
    CHECK(r.nperm == 999);
    CHECK(r.p_value >= 1.0 / (r.nperm + 1));
}

TEST_CASE("permutation test is independent of the worker count") {
    auto lattice = make_lattice(6, 6, Contiguity::queen);
    auto y = iid_noise(36, 1.0, 5);
    set_max_threads(1);
    const auto a = moran_permutation(y, lattice.W, 499, 42);
    set_max_threads(8);
    const auto b = moran_permutation(y, lattice.W, 499, 42);
    set_max_threads(0);
    CHECK(a.p_value == b.p_value);
    CHECK(a.expectation == b.expectation);
    CHECK(a.variance == b.variance);
}

TEST_CASE("permutation test: power against a SAR lag field") {
    // a 15x15 field at rho = 0.7 is detected essentially always; the same
    // check on a 6x6 field has visibly lower but still high power
    auto big = make_lattice(15, 15, Contiguity::rook);
    const auto Wb = row_standardize(big.W);
    const Eigen::MatrixXd Xb = Eigen::MatrixXd::Ones(225, 1);
    const Eigen::VectorXd beta0 = Eigen::VectorXd::Zero(1);
    int hits_big = 0;
    for (int r = 0; r < 100; ++r) {
        auto y = simulate_sar_lag(Wb, Xb, beta0, 0.7, 1.0, derive_seed(99, r));
        const auto t = moran_permutation(y, Wb, 999, derive_seed(100, r),
                                         Alternative::greater);
        if (t.p_value <= 0.01) ++hits_big;
    }
    CHECK(hits_big >= 95);

    auto small = make_lattice(6, 6, Contiguity::rook);
    const auto Ws = row_standardize(small.W);
    const Eigen::MatrixXd Xs = Eigen::MatrixXd::Ones(36, 1);
    int hits_small = 0;
    for (int r = 0; r < 100; ++r) {
        auto y = simulate_sar_lag(Ws, Xs, beta0, 0.7, 1.0, derive_seed(99, r));
        const auto t = moran_permutation(y, Ws, 999, derive_seed(100, r),
                                         Alternative::greater);
        if (t.p_value <= 0.01) ++hits_small;
    }
    CHECK(hits_small >= 70);
}

TEST_CASE("local Moran: sum identity and island convention") {
    auto units = testutil::units_from_points({{0, 0}, {1, 0}, {2, 0}, {9, 9}});
    auto w = build_distance_band(units, 1.5, Metric::euclidean);
    REQUIRE(w.has_islands());
    auto y = vec({1.0, -2.0, 0.5, 3.0});
    const auto local = moran_local(y, w);
    CHECK(local[3] == 0.0);  // empty neighbourhood
    const double sum = local[0] + local[1] + local[2] + local[3];
    CHECK(sum == doctest::Approx(w.s0() * moran_global(y, w)).epsilon(1e-10));
}

TEST_CASE("local Moran sum identity over randomized instances") {
    for (int rep = 0; rep < 10; ++rep) {
        const int rows = 3 + rep % 4, cols = 3 + (rep * 7) % 5;
        auto lattice = make_lattice(rows, cols, rep % 2 ? Contiguity::rook : Contiguity::queen);
        auto y = iid_noise(rows * cols, 1.0, derive_seed(1000, rep));
        for (const auto& w : {lattice.W, row_standardize(lattice.W),
                              build_knn(lattice.units, 3, Metric::euclidean),
                              build_inverse_distance(lattice.units, 1.0, Metric::euclidean)}) {
            const auto local = moran_local(y, w);
            double sum = 0.0;
            for (double v : local) sum += v;
            const double target = w.s0() * moran_global(y, w);
            CHECK(sum == doctest::Approx(target).epsilon(1e-10));
        }
    }
}

TEST_CASE("local Moran: center spike on a 3x3 rook lattice") {
    auto lattice = make_lattice(3, 3, Contiguity::rook);
    std::vector<double> y(9, 0.0);
    y[4] = 1.0;  // center
    const auto local = moran_local(vec(y), lattice.W);
    CHECK(local[4] < 0.0);
    CHECK(local[4] == doctest::Approx(testutil::local_moran_brute_force(y, lattice.W, 4)));
    // direct hand evaluation: n=9, z_c=8/9, lag=-4/9, ssq=8/9 -> I_c = -4
    CHECK(local[4] == doctest::Approx(-4.0).epsilon(1e-12));
}

TEST_CASE("conditional permutation p-values") {
    auto units = testutil::units_from_points({{0, 0}, {1, 0}, {2, 0}, {9, 9}});
    auto w = build_distance_band(units, 1.5, Metric::euclidean);
    auto y = vec({1.0, -2.0, 0.5, 3.0});
    const auto p = local_permutation(y, w, 199, 11);
    CHECK(p[3] == 1.0);  // island convention
    for (double v : p) {
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
    }

    set_max_threads(1);
    const auto p1 = local_permutation(y, w, 199, 11);
    set_max_threads(8);
    const auto p2 = local_permutation(y, w, 199, 11);
    set_max_threads(0);
    CHECK(p1 == p2);
}

TEST_CASE("planted block: interior significant and classified HighHigh") {
    const int rows = 12, cols = 12;
    auto lattice = make_lattice(rows, cols, Contiguity::rook);
    const auto W = row_standardize(lattice.W);
    auto field = planted_block(rows, cols, {4, 4, 3, 3}, 5.0);
    auto noise = iid_noise(rows * cols, 1.0, 2024);
    for (int i = 0; i < rows * cols; ++i) field.values[i] += noise.values[i];

    const auto result = lisa(field, W, 999, 31, 0.05);
    // block interior: all lattice neighbours inside the block -> (5,5) only
    const int interior = 5 * cols + 5;
    CHECK(result.p_values[interior] <= 0.05);
    CHECK(result.classes[interior] == LisaClass::HighHigh);
}

TEST_CASE("single spike in an engineered low neighbourhood is HighLow") {
    const int rows = 9, cols = 9;
    auto lattice = make_lattice(rows, cols, Contiguity::rook);
    const auto W = row_standardize(lattice.W);
    auto y = iid_noise(rows * cols, 1.0, 77);
    const int spike = 4 * cols + 4;
    y.values[spike] = 8.0;
    for (int j : W.neighbors(spike)) y.values[j] = -3.0;

    const auto result = lisa(y, W, 999, 13, 0.05);
    CHECK(result.classes[spike] == LisaClass::HighLow);
}

TEST_CASE("lisa_classify edge rules") {
    auto lattice = make_lattice(3, 3, Contiguity::rook);
    auto y = iid_noise(9, 1.0, 3);

    // all p above alpha -> everything NotSignificant
    std::vector<double> p_high(9, 0.99);
    auto classes = lisa_classify(y, lattice.W, p_high, 0.05);
    for (auto c : classes) CHECK(c == LisaClass::NotSignificant);

    // exact zero centered value resolves to NotSignificant even if significant
    std::vector<double> y2(9);
    for (int i = 0; i < 9; ++i) y2[i] = static_cast<double>(i);
    y2[4] = 4.0;  // equals the mean of 0..8
    std::vector<double> p_low(9, 0.001);
    auto classes2 = lisa_classify(vec(y2), lattice.W, p_low, 0.05);
    CHECK(classes2[4] == LisaClass::NotSignificant);

    CHECK_THROWS_AS(lisa_classify(y, lattice.W, p_high, 0.0), ConfigError);
    CHECK_THROWS_AS(lisa_classify(y, lattice.W, {0.5, 0.5}, 0.05), DataError);
}

TEST_CASE("classification quadrants are invariant under positive row scaling") {
    auto lattice = make_lattice(5, 5, Contiguity::rook);
    auto y = iid_noise(25, 1.0, 55);
    std::vector<double> p(25, 0.01);  // force every unit through classification

    auto scaled_entries = lattice.W.triplets();
    for (auto& e : scaled_entries) e.w *= 0.1 + 0.3 * ((e.i * 7) % 5);
    WeightMatrix scaled(25, scaled_entries, lattice.W.builder());

    const auto a = lisa_classify(y, lattice.W, p, 0.05);
    const auto b = lisa_classify(y, scaled, p, 0.05);
    CHECK(a == b);
}

TEST_CASE("classification commutes with relabeling the units") {
    auto lattice = make_lattice(4, 4, Contiguity::queen);
    auto y = iid_noise(16, 1.0, 21);
    std::vector<double> p(16, 0.01);
    const auto base = lisa_classify(y, lattice.W, p, 0.05);

    // permute unit order, conjugate W, classify, then un-permute
    std::vector<int> perm(16);
    std::iota(perm.begin(), perm.end(), 0);
    CounterRng rng(5);
    counter_shuffle(perm, rng);
    std::vector<WeightMatrix::Triplet> entries;
    for (const auto& e : lattice.W.triplets())
        entries.push_back({perm[e.i], perm[e.j], e.w});
    WeightMatrix conjugated(16, entries, lattice.W.builder());
    AttributeVector y2 = y;
    for (int i = 0; i < 16; ++i) y2.values[perm[i]] = y.values[i];

    const auto relabeled = lisa_classify(y2, conjugated, p, 0.05);
    for (int i = 0; i < 16; ++i) CHECK(relabeled[perm[i]] == base[i]);
}

TEST_CASE("group summary partitions the significant units") {
    auto lattice = make_lattice(4, 4, Contiguity::rook);
    std::vector<SpatialUnit> units = lattice.units.units();
    // municipality-style labels mirroring a frequency table: 9 in "2",
    // 1 in "7", 3 in "9"
    std::vector<LisaClass> classes(16, LisaClass::NotSignificant);
    for (int i = 0; i < 9; ++i) {
        units[i].group = "2";
        classes[i] = LisaClass::HighHigh;
    }
    units[9].group = "7";
    classes[9] = LisaClass::HighHigh;
    for (int i = 10; i < 13; ++i) {
        units[i].group = "9";
        classes[i] = LisaClass::HighHigh;
    }
    for (int i = 13; i < 16; ++i) units[i].group = "5";  // no significant units
    UnitCollection labeled(units, CoordinateSystem::planar);

    const auto table = lisa_group_summary(classes, labeled);
    REQUIRE(table.size() == 3);  // group "5" omitted
    CHECK(table.at("2").at(LisaClass::HighHigh) == 9);
    CHECK(table.at("7").at(LisaClass::HighHigh) == 1);
    CHECK(table.at("9").at(LisaClass::HighHigh) == 3);

    int total = 0;
    for (const auto& [_, counts] : table)
        for (const auto& [__, c] : counts) total += c;
    int significant = 0;
    for (auto c : classes)
        if (c != LisaClass::NotSignificant) ++significant;
    CHECK(total == significant);
}

TEST_CASE("group summary: no labels -> single group 'all'; none significant -> empty") {
    auto lattice = make_lattice(3, 3, Contiguity::rook);
    std::vector<LisaClass> classes(9, LisaClass::NotSignificant);
    CHECK(lisa_group_summary(classes, lattice.units).empty());

    classes[0] = LisaClass::LowLow;
    const auto table = lisa_group_summary(classes, lattice.units);
    REQUIRE(table.size() == 1);
    CHECK(table.at("all").at(LisaClass::LowLow) == 1);
}

TEST_CASE("nperm guards") {
    auto lattice = make_lattice(3, 3, Contiguity::rook);
    auto y = iid_noise(9, 1.0, 1);
    CHECK_THROWS_AS(moran_permutation(y, lattice.W, 50, 1), ConfigError);
    CHECK_THROWS_AS(local_permutation(y, lattice.W, 50, 1), ConfigError);
}

TEST_CASE("Bonferroni correction only removes significant units") {
    const int rows = 12, cols = 12;
    auto lattice = make_lattice(rows, cols, Contiguity::rook);
    const auto W = row_standardize(lattice.W);
    auto field = planted_block(rows, cols, {4, 4, 3, 3}, 5.0);
    auto noise = iid_noise(rows * cols, 1.0, 91);
    for (int i = 0; i < rows * cols; ++i) field.values[i] += noise.values[i];

    const auto plain = lisa(field, W, 999, 17, 0.05);
    const auto corrected = lisa(field, W, 999, 17, 0.05, true);
    int n_plain = 0, n_corr = 0;
    for (int i = 0; i < rows * cols; ++i) {
        if (plain.classes[i] != LisaClass::NotSignificant) ++n_plain;
        if (corrected.classes[i] != LisaClass::NotSignificant) {
            ++n_corr;
            CHECK(plain.classes[i] == corrected.classes[i]);
        }
    }
    CHECK(n_corr <= n_plain);
    // p-values themselves are identical; only the level moves
    CHECK(plain.p_values == corrected.p_values);
}
