#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tfs/error.hpp"
#include "tfs/similarity.hpp"

namespace {

using namespace tfs;
using oracle::from_columns;

double pearson2(const std::vector<double>& a, const std::vector<double>& b) {
    return pearson_matrix(from_columns({a, b})).values(0, 1);
}

FeatureMatrix random_features(std::size_t samples, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    std::vector<std::vector<double>> cols(n, std::vector<double>(samples));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t s = 0; s < samples; ++s) {
            // shared component plus a few ties so ranks are exercised
            cols[j][s] = j % 3 == 0 ? std::round(nd(rng) * 2.0) : nd(rng) + 0.3 * static_cast<double>(s % 5);
        }
    return from_columns(cols);
}

TEST(Pearson, PointValues) {
    EXPECT_NEAR(pearson2({1, 2, 3, 4}, {1, 3, 2, 4}), 0.8, 1e-15);
    EXPECT_DOUBLE_EQ(pearson2({1, 5, 2, 7}, {1, 5, 2, 7}), 1.0);
    EXPECT_DOUBLE_EQ(pearson2({1, 5, 2, 7}, {-1, -5, -2, -7}), -1.0);
}

TEST(Pearson, ZeroVarianceIsAnError) {
    EXPECT_THROW(pearson_matrix(from_columns({{1, 2, 3}, {4, 4, 4}})), ValidationError);
    EXPECT_THROW(pearson_matrix(from_columns({{1}, {2}})), ValidationError);
}

TEST(Ranks, AverageTies) {
    const std::vector<double> x{1, 2, 2, 4};
    EXPECT_EQ(rank_average(x), (std::vector<double>{1, 2.5, 2.5, 4}));
    const std::vector<double> y{3, 1, 3, 3, 0};
    const auto r = rank_average(y);
    EXPECT_EQ(r, (std::vector<double>{4, 2, 4, 4, 1}));
    double sum = 0;
    for (double v : r) sum += v;
    EXPECT_EQ(sum, 15.0);
}

TEST(Spearman, PointValues) {
    const auto m = spearman_matrix(from_columns({{1, 2, 3}, {1, 4, 9}, {9, 4, 1}}));
    EXPECT_DOUBLE_EQ(m.values(0, 1), 1.0);
    EXPECT_DOUBLE_EQ(m.values(0, 2), -1.0);
    EXPECT_EQ(m.values(1, 1), 1.0);
}

TEST(Energy, PointValues) {
    // alpha = 0 on identical columns: 1 - |1| = 0
    EXPECT_NEAR(energy_matrix(from_columns({{1, 3, 2}, {1, 3, 2}}), 0.0).values(0, 1), 0.0, 1e-15);
    // alpha = 1: max of the normalised spreads, both equal sqrt(1/6)
    const auto e1 = energy_matrix(from_columns({{0, 0.5, 1}, {10, 11, 12}}), 1.0);
    EXPECT_NEAR(e1.values(0, 1), std::sqrt(1.0 / 6.0), 1e-15);
    EXPECT_EQ(e1.values(0, 0), 0.0);
}

TEST(Energy, HalfAlphaIsTheAverageOfTheComponents) {
    // f1 = [1, 3, 2] normalises to [0, 1, 0.5]; spearman(f0, f1) = 0.5
    const auto x = from_columns({{0, 0.5, 1}, {1, 3, 2}});
    const double e = energy_matrix(x, 1.0).values(0, 1);
    const double rho = energy_matrix(x, 0.0).values(0, 1);
    EXPECT_NEAR(e, 0.40824829046386302, 1e-15);
    EXPECT_NEAR(rho, 0.5, 1e-15);
    EXPECT_NEAR(energy_matrix(x, 0.5).values(0, 1), 0.45412414523193151, 1e-15);
    EXPECT_NEAR(energy_matrix(x, 0.5).values(0, 1), 0.5 * e + 0.5 * rho, 1e-15);
}

TEST(Energy, AlphaZeroIsOneMinusAbsSpearman) {
    const auto x = random_features(40, 9, 3);
    const auto e = energy_matrix(x, 0.0), s = spearman_matrix(x);
    for (std::size_t i = 0; i < 9; ++i)
        for (std::size_t j = 0; j < 9; ++j)
            if (i != j) EXPECT_NEAR(e.values(i, j), 1 - std::abs(s.values(i, j)), 1e-12);
}

TEST(Energy, Errors) {
    EXPECT_THROW(energy_matrix(from_columns({{1, 2, 3}, {2, 2, 2}}), 0.5), ValidationError);
    EXPECT_THROW(energy_matrix(from_columns({{1, 2, 3}, {2, 1, 2}}), 1.5), ValidationError);
    EXPECT_THROW(energy_matrix(from_columns({{1, 2, 3}, {2, 1, 2}}), -0.1), ValidationError);
}

TEST(Square, Elementwise) {
    SimilarityMatrix s;
    s.values = Matrix(2, 2, 1.0);
    s.values(0, 1) = s.values(1, 0) = -0.5;
    const auto q = apply_square(s);
    EXPECT_TRUE(q.squared);
    EXPECT_EQ(q.values(0, 1), 0.25);
    EXPECT_EQ(q.values(1, 1), 1.0);
    s.metric = Metric::energy;
    EXPECT_THROW(apply_square(s), ValidationError);
    EXPECT_THROW(similarity_matrix(from_columns({{1, 2, 3}, {2, 1, 3}}), Metric::energy, true, 0.5),
                 ValidationError);
    EXPECT_THROW(similarity_matrix(from_columns({{1, 2, 3}, {2, 1, 3}}), Metric::pearson, false, 0.5),
                 ValidationError);
}

TEST(Similarity, MatchesNaiveOracle) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const std::size_t n = 3 + seed, samples = 5 + 7 * seed;
        const auto x = random_features(samples, n, seed);
        const auto p = pearson_matrix(x), s = spearman_matrix(x);
        const double alpha = 0.1 * static_cast<double>(seed);
        const auto e = energy_matrix(x, alpha);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                const auto a = x.column(i), b = x.column(j);
                EXPECT_NEAR(p.values(i, j), oracle::naive_pearson(a, b), 1e-12);
                EXPECT_NEAR(s.values(i, j), oracle::naive_spearman(a, b), 1e-12);
                EXPECT_NEAR(e.values(i, j), oracle::naive_energy(a, b, alpha), 1e-12);
            }
    }
}

TEST(Similarity, SymmetricAndInRange) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto x = random_features(30, 12, 100 + seed);
        for (Metric m : {Metric::pearson, Metric::spearman, Metric::energy}) {
            for (bool sq : {false, true}) {
                if (m == Metric::energy && sq) continue;
                std::optional<double> alpha;
                if (m == Metric::energy) alpha = 0.05 * static_cast<double>(seed);
                const auto c = similarity_matrix(x, m, sq, alpha);
                const double lo = (m == Metric::energy || sq) ? 0.0 : -1.0;
                for (std::size_t i = 0; i < 12; ++i) {
                    EXPECT_EQ(c.values(i, i), m == Metric::energy ? 0.0 : 1.0);
                    for (std::size_t j = 0; j < 12; ++j) {
                        EXPECT_EQ(c.values(i, j), c.values(j, i));
                        EXPECT_GE(c.values(i, j), lo);
                        EXPECT_LE(c.values(i, j), 1.0);
                    }
                }
            }
        }
    }
}

TEST(Similarity, PearsonAffineInvariance) {
    auto x = random_features(25, 4, 7);
    const auto base = pearson_matrix(x);
    for (std::size_t s = 0; s < 25; ++s) x.values(s, 1) = 3.5 * x.values(s, 1) - 2.0;
    const auto scaled = pearson_matrix(x);
    for (std::size_t s = 0; s < 25; ++s) x.values(s, 1) = -x.values(s, 1);
    const auto flipped = pearson_matrix(x);
    for (std::size_t j : {0u, 2u, 3u}) {
        EXPECT_NEAR(scaled.values(1, j), base.values(1, j), 1e-12);
        EXPECT_NEAR(flipped.values(1, j), -base.values(1, j), 1e-12);
    }
}

TEST(Similarity, SpearmanMonotoneInvariance) {
    auto x = random_features(25, 4, 9);
    const auto base = spearman_matrix(x);
    for (std::size_t s = 0; s < 25; ++s) x.values(s, 2) = std::exp(x.values(s, 2)) + 5.0;
    const auto mapped = spearman_matrix(x);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(mapped.values(i, j), base.values(i, j), 1e-12);
}

TEST(Similarity, MetricNamesRoundTrip) {
    for (Metric m : {Metric::pearson, Metric::spearman, Metric::energy}) EXPECT_EQ(parse_metric(to_string(m)), m);
    EXPECT_THROW(parse_metric("kendall"), ValidationError);
}

}  // namespace
