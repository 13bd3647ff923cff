#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <random>

#include <boost/math/distributions/students_t.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>

#include "oracles.hpp"
#include "tfs/error.hpp"
#include "tfs/metrics.hpp"
#include "tfs/model_selection.hpp"

namespace {

using namespace tfs;
using Big = boost::multiprecision::cpp_dec_float_50;

ClassifierSpec knn() {
    ClassifierSpec s;
    s.kind = ClassifierKind::knn;
    return s;
}

GridSpec small_grid() {
    GridSpec g;
    g.tfs_metrics = {Metric::pearson, Metric::energy};
    g.tfs_square = {true, false};
    g.tfs_alpha = {0.5};
    g.inffs_alpha = {0.3, 0.7};
    g.inffs_theta = {0.5, 0.9};
    return g;
}

TEST(Grid, DefaultSizes) {
    const auto g = GridSpec::defaults();
    EXPECT_EQ(enumerate_grid(Method::tfs, g, 10).size(), 14u);
    EXPECT_EQ(enumerate_grid(Method::inffs, g, 10).size(), 100u);
    for (const auto& c : enumerate_grid(Method::tfs, g, 10)) EXPECT_NO_THROW(c.validate());
    for (const auto& c : enumerate_grid(Method::inffs, g, 10)) EXPECT_NO_THROW(c.validate());
    EXPECT_EQ(tenths()[2], 0.3);
    EXPECT_EQ(tenths()[9], 1.0);
}

TEST(Grid, SingleConfigIsReturnedWithItsMean) {
    const auto x = oracle::latent_dataset(60, 4, 8, 1);
    GridSearchOptions opt;
    opt.grid.tfs_metrics = {Metric::spearman};
    opt.grid.tfs_square = {false};
    const auto r = grid_search(x, Method::tfs, knn(), 4, opt);
    ASSERT_EQ(r.scores.size(), 1u);
    EXPECT_EQ(r.best.metric, Metric::spearman);
    EXPECT_FALSE(r.best.squared);
    EXPECT_EQ(r.best.cardinality, 4u);

    // the same mean computed by hand over the folds
    const auto folds = stratified_kfold(x, 3, 0);
    double sum = 0;
    for (const auto& f : folds) {
        const auto tr = x.subset_rows(f.train_indices), va = x.subset_rows(f.validation_indices);
        const auto ranking = rank_with_constant_tail(tr, r.best);
        sum += balanced_accuracy(*va.labels, select_and_predict(tr, va, ranking, 4, knn()));
    }
    EXPECT_DOUBLE_EQ(r.cv_score, sum / 3.0);
}

TEST(Grid, TiesPreferFewerActiveParameters) {
    // pure noise with k = n: every config selects all features, so every
    // config scores the same and the 1-parameter (unsquared) one wins
    const auto x = oracle::latent_dataset(45, 0, 6, 2);
    GridSearchOptions opt;
    opt.grid = small_grid();
    const auto r = grid_search(x, Method::tfs, knn(), 6, opt);
    for (const auto& s : r.scores) EXPECT_EQ(s.cv_score, r.cv_score);
    EXPECT_EQ(r.best.metric, Metric::pearson);
    EXPECT_FALSE(r.best.squared);
    // inffs configs all count 2: enumeration order decides
    const auto inf = grid_search(x, Method::inffs, knn(), 6, opt);
    EXPECT_EQ(*inf.best.alpha, 0.3);
    EXPECT_EQ(*inf.best.theta, 0.5);
}

TEST(Grid, DeterministicAcrossThreadCounts) {
    const auto x = oracle::latent_dataset(60, 5, 15, 4);
    GridSearchOptions one, two;
    one.grid = two.grid = small_grid();
    two.threads = 2;
    for (Method m : {Method::tfs, Method::inffs}) {
        const auto a = grid_search(x, m, knn(), 5, one), b = grid_search(x, m, knn(), 5, two);
        EXPECT_EQ(a.best.describe(), b.best.describe());
        EXPECT_EQ(a.cv_score, b.cv_score);
        ASSERT_EQ(a.scores.size(), b.scores.size());
        for (std::size_t i = 0; i < a.scores.size(); ++i) EXPECT_EQ(a.scores[i].fold_scores, b.scores[i].fold_scores);
    }
}

TEST(Grid, CellsAgreeWithSingleSearches) {
    const auto x = oracle::latent_dataset(60, 5, 15, 6);
    GridSearchOptions opt;
    opt.grid = small_grid();
    ClassifierSpec tree;
    tree.kind = ClassifierKind::decision_tree;
    const std::vector<ClassifierSpec> cls{knn(), tree};
    const std::vector<std::size_t> ks{3, 7};
    const auto cells = grid_search_cells(x, Method::tfs, cls, ks, opt);
    for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t k = 0; k < 2; ++k) {
            const auto single = grid_search(x, Method::tfs, cls[c], ks[k], opt);
            EXPECT_EQ(cells[c][k].best.describe(), single.best.describe());
            EXPECT_EQ(cells[c][k].cv_score, single.cv_score);
        }
}

TEST(Grid, Errors) {
    const auto x = oracle::latent_dataset(60, 2, 3, 6);
    EXPECT_THROW(grid_search(x, Method::tfs, knn(), 6, {}), ValidationError);
    EXPECT_THROW(grid_search(x, Method::tfs, knn(), 0, {}), ValidationError);
    GridSearchOptions big;
    big.cv_k = 40;
    EXPECT_THROW(grid_search(x, Method::tfs, knn(), 2, big), ValidationError);
}

TEST(ConstantTail, ConstantFeaturesRankLast) {
    auto x = oracle::latent_dataset(30, 3, 3, 3);
    for (std::size_t s = 0; s < 30; ++s) x.values(s, 1) = 2.0;
    SelectionConfig c;
    c.metric = Metric::pearson;
    const auto r = rank_with_constant_tail(x, c);
    EXPECT_EQ(r.order.size(), 6u);
    EXPECT_EQ(r.order.back(), 1u);
    EXPECT_TRUE(std::isinf(r.scores[1]));
}

// t = sqrt(m) * mean / sigma with sigma^2 = (1/m) sum (d - mean)^2, in 50
// decimal digits; p from the same distribution evaluated in Big.
std::pair<double, double> big_ttest(const std::vector<double>& d) {
    const Big m = static_cast<Big>(d.size());
    Big mean = 0;
    for (double v : d) mean += Big(v);
    mean /= m;
    Big ss = 0;
    for (double v : d) ss += (Big(v) - mean) * (Big(v) - mean);
    const Big sigma = sqrt(ss / m);
    const Big t = sqrt(m) * mean / sigma;
    boost::math::students_t_distribution<Big> dist(m - 1);
    const Big p = 2 * cdf(complement(dist, abs(t)));
    return {t.convert_to<double>(), p.convert_to<double>()};
}

TEST(TTest, FixedVectorAgainstHighPrecision) {
    const std::vector<double> d{0.021, -0.004, 0.035, 0.012, 0.0, 0.018, -0.011, 0.027, 0.009, 0.015};
    const auto r = paired_ttest(d);
    const auto [t, p] = big_ttest(d);
    EXPECT_EQ(r.degrees_of_freedom, 9);
    EXPECT_NEAR(r.t_statistic, t, 1e-9);
    EXPECT_NEAR(r.p_value, p, 1e-9);
    EXPECT_EQ(r.flag, TTestFlag::none);
    EXPECT_NEAR(r.t_statistic, 2.861611507968056, 1e-12);
}

TEST(TTest, DegenerateCases) {
    const std::vector<double> zeros(10, 0.0);
    auto r = paired_ttest(zeros);
    EXPECT_EQ(r.flag, TTestFlag::degenerate);
    EXPECT_EQ(r.p_value, 1.0);
    EXPECT_EQ(r.t_statistic, 0.0);

    const std::vector<double> flat(6, 0.02);
    r = paired_ttest(flat);
    EXPECT_EQ(r.flag, TTestFlag::infinite_statistic);
    EXPECT_EQ(r.p_value, 0.0);
    EXPECT_TRUE(std::isinf(r.t_statistic) && r.t_statistic > 0);

    const std::vector<double> anti{0.1, -0.1, 0.1, -0.1};
    r = paired_ttest(anti);
    EXPECT_EQ(r.t_statistic, 0.0);
    EXPECT_EQ(r.p_value, 1.0);

    EXPECT_THROW(paired_ttest(std::vector<double>{0.1}), ValidationError);
}

TEST(TTest, IdenticalPipelinesAreDegenerate) {
    const auto x = oracle::latent_dataset(40, 4, 4, 8);
    SelectionConfig c;
    c.cardinality = 3;
    const auto pipe = make_pipeline(c, knn());
    const auto r = paired_cv_ttest(pipe, pipe, x, 3, 0);
    EXPECT_EQ(r.differences.size(), 6u);
    EXPECT_EQ(r.degrees_of_freedom, 5);
    EXPECT_EQ(r.flag, TTestFlag::degenerate);
    EXPECT_EQ(r.p_value, 1.0);
}

TEST(TTest, RandomGuessPipelinesRarelyReject) {
    const auto x = oracle::latent_dataset(40, 2, 2, 9);
    auto guesser = [](std::uint64_t seed) {
        auto rng = std::make_shared<std::mt19937_64>(seed);
        return Pipeline([rng](const FeatureMatrix&, const FeatureMatrix& test) {
            std::vector<int> pred(test.samples());
            for (auto& p : pred) p = static_cast<int>((*rng)() % 2);
            return balanced_accuracy(*test.labels, pred);
        });
    };
    int rejections = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto r = paired_cv_ttest(guesser(2 * trial + 1), guesser(2 * trial + 2), x, 15, trial);
        EXPECT_EQ(r.degrees_of_freedom, 29);
        rejections += r.p_value < 0.05;
    }
    EXPECT_LE(rejections, 10);
}

}  // namespace
