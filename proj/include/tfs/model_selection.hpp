#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tfs/classifiers.hpp"
#include "tfs/dataset.hpp"
#include "tfs/selection.hpp"

namespace tfs {

// Hyper-parameter search space. Defaults are the benchmark grid:
// inffs alpha, theta in {0.1, ..., 1.0}; tfs metric in {pearson, spearman,
// energy}, square in {true, false} except for energy, alpha in
// {0.1, ..., 1.0} for energy only.
struct GridSpec {
    std::vector<double> inffs_alpha;
    std::vector<double> inffs_theta;
    std::vector<Metric> tfs_metrics;
    std::vector<bool> tfs_square;
    std::vector<double> tfs_alpha;

    static GridSpec defaults();
};

// 0.1, 0.2, ..., 1.0 computed as i / 10 so every value is the nearest
// double to its decimal.
std::vector<double> tenths();

// Enumeration order is the tie-break of last resort.
std::vector<SelectionConfig> enumerate_grid(Method method, const GridSpec& grid, std::size_t cardinality);

struct ConfigScore {
    SelectionConfig config;
    double cv_score;  // mean validation balanced accuracy; NaN if failed
    std::vector<double> fold_scores;
    std::string error;
};

struct GridResult {
    SelectionConfig best;
    double cv_score = 0.0;
    std::vector<ConfigScore> scores;  // enumeration order
};

struct GridSearchOptions {
    std::size_t cv_k = 3;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    GridSpec grid = GridSpec::defaults();
};

// Picks the configuration with the highest mean validation balanced
// accuracy over stratified folds; ties prefer fewer active hyper-parameters,
// then earlier enumeration.
GridResult grid_search(const FeatureMatrix& train, Method method, const ClassifierSpec& classifier,
                       std::size_t cardinality, const GridSearchOptions& options = {});

// Same search for several (classifier, cardinality) cells at once. Rankings
// are independent of k and the classifier, so each (config, fold) ranking is
// computed once. Result is indexed [classifier][cardinality].
std::vector<std::vector<GridResult>> grid_search_cells(const FeatureMatrix& train, Method method,
                                                       std::span<const ClassifierSpec> classifiers,
                                                       std::span<const std::size_t> cardinalities,
                                                       const GridSearchOptions& options = {});

// Ranking of all features of `train`. Features that are constant in `train`
// are excluded from the similarity computation and appended at the end in
// index order.
FeatureRanking rank_with_constant_tail(const FeatureMatrix& train, const SelectionConfig& config);

// Selects on train, standardises with train statistics, fits, predicts test.
// Constant-in-train columns among the selected ones are dropped before
// standardising.
std::vector<int> select_and_predict(const FeatureMatrix& train, const FeatureMatrix& test,
                                    const FeatureRanking& ranking, std::size_t k, const ClassifierSpec& classifier);

// (train, test) -> performance of a complete pipeline, e.g. balanced accuracy.
using Pipeline = std::function<double(const FeatureMatrix& train, const FeatureMatrix& test)>;

// Pruning, selection, standardisation and classification; scores the
// balanced accuracy on `test`.
Pipeline make_pipeline(const SelectionConfig& config, const ClassifierSpec& classifier);

enum class TTestFlag { none, degenerate, infinite_statistic };

std::string_view to_string(TTestFlag f);

struct TTestResult {
    double t_statistic = 0.0;
    int degrees_of_freedom = 0;
    double p_value = 1.0;
    double mean_difference = 0.0;
    double sigma = 0.0;  // population standard deviation of the differences
    std::vector<double> differences;
    TTestFlag flag = TTestFlag::none;
};

// t = sqrt(m) * mean / sigma over the m differences, sigma with 1/m,
// df = m - 1, two-sided p-value.
TTestResult paired_ttest(std::span<const double> differences);

// R repetitions of a stratified half/half split (seed + r); each pipeline is
// trained on one half and scored on the other, both ways, giving 2R paired
// differences a - b.
TTestResult paired_cv_ttest(const Pipeline& a, const Pipeline& b, const FeatureMatrix& data,
                            std::size_t repetitions = 15, std::uint64_t seed = 0);

}  // namespace tfs
