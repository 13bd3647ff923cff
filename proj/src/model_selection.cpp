#include "tfs/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "tfs/error.hpp"
#include "tfs/metrics.hpp"
#include "tfs/parallel.hpp"

namespace tfs {

std::vector<double> tenths() {
    std::vector<double> v;
    for (int i = 1; i <= 10; ++i) v.push_back(i / 10.0);
    return v;
}

GridSpec GridSpec::defaults() {
    return {tenths(), tenths(), {Metric::pearson, Metric::spearman, Metric::energy}, {true, false}, tenths()};
}

std::vector<SelectionConfig> enumerate_grid(Method method, const GridSpec& grid, std::size_t cardinality) {
    std::vector<SelectionConfig> out;
    if (method == Method::inffs) {
        for (double a : grid.inffs_alpha)
            for (double t : grid.inffs_theta) {
                SelectionConfig c;
                c.method = Method::inffs;
                c.alpha = a;
                c.theta = t;
                c.cardinality = cardinality;
                out.push_back(c);
            }
        return out;
    }
    for (Metric m : grid.tfs_metrics) {
        if (m == Metric::energy) {
            for (double a : grid.tfs_alpha) {
                SelectionConfig c;
                c.metric = m;
                c.alpha = a;
                c.cardinality = cardinality;
                out.push_back(c);
            }
        } else {
            for (bool sq : grid.tfs_square) {
                SelectionConfig c;
                c.metric = m;
                c.squared = sq;
                c.cardinality = cardinality;
                out.push_back(c);
            }
        }
    }
    return out;
}

FeatureRanking rank_with_constant_tail(const FeatureMatrix& train, const SelectionConfig& config) {
    const auto kept = non_constant_features(train.values);
    const auto inner = rank_features(train.subset_columns(kept), config);

    FeatureRanking out;
    out.scores.assign(train.features(), -std::numeric_limits<double>::infinity());
    std::vector<bool> used(train.features(), false);
    for (std::size_t i = 0; i < kept.size(); ++i) out.scores[kept[i]] = inner.scores[i];
    for (auto local : inner.order) {
        out.order.push_back(kept[local]);
        used[kept[local]] = true;
    }
    for (std::size_t j = 0; j < train.features(); ++j)
        if (!used[j]) out.order.push_back(j);
    return out;
}

std::vector<int> select_and_predict(const FeatureMatrix& train, const FeatureMatrix& test,
                                    const FeatureRanking& ranking, std::size_t k, const ClassifierSpec& classifier) {
    if (k > ranking.order.size())
        throw ValidationError("cardinality k = " + std::to_string(k) + " exceeds the feature count " +
                              std::to_string(ranking.order.size()));
    std::vector<std::size_t> chosen(ranking.order.begin(), ranking.order.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(chosen.begin(), chosen.end());
    FeatureMatrix tr = train.subset_columns(chosen);
    const auto varying = non_constant_features(tr.values);
    FeatureMatrix te = test.subset_columns(chosen);
    if (varying.size() != chosen.size()) {
        tr = tr.subset_columns(varying);
        te = te.subset_columns(varying);
    }
    if (tr.features() == 0) {
        // Nothing informative survived: every prediction is the majority class.
        std::vector<long> counts(train.num_classes(), 0);
        for (int l : *train.labels) ++counts[l];
        const int major = static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
        return std::vector<int>(test.samples(), major);
    }
    const auto scaler = fit_standardizer(tr);
    return fit_predict(classifier, apply_standardizer(scaler, tr), apply_standardizer(scaler, te));
}

std::vector<std::vector<GridResult>> grid_search_cells(const FeatureMatrix& train, Method method,
                                                       std::span<const ClassifierSpec> classifiers,
                                                       std::span<const std::size_t> cardinalities,
                                                       const GridSearchOptions& options) {
    for (auto k : cardinalities) {
        if (k == 0) throw ValidationError("cardinality k must be a positive integer");
        if (k > train.features())
            throw ValidationError("cardinality k = " + std::to_string(k) + " exceeds the feature count " +
                                  std::to_string(train.features()));
    }
    const auto folds = stratified_kfold(train, options.cv_k, options.seed);
    const auto configs = enumerate_grid(method, options.grid, 1);
    if (configs.empty()) throw ValidationError("the hyper-parameter grid is empty");
    for (const auto& c : configs) c.validate();

    std::vector<FeatureMatrix> fold_train, fold_val;
    for (const auto& f : folds) {
        fold_train.push_back(train.subset_rows(f.train_indices));
        fold_val.push_back(train.subset_rows(f.validation_indices));
    }

    const std::size_t nf = folds.size(), nc = configs.size();
    std::vector<std::optional<FeatureRanking>> rankings(nc * nf);
    std::vector<std::string> errors(nc);
    std::vector<std::string> task_errors(nc * nf);
    parallel_for(nc * nf, options.threads, [&](std::size_t task) {
        try {
            rankings[task] = rank_with_constant_tail(fold_train[task % nf], configs[task / nf]);
        } catch (const std::exception& e) {
            task_errors[task] = e.what();
        }
    });
    for (std::size_t t = 0; t < nc * nf; ++t)
        if (!task_errors[t].empty() && errors[t / nf].empty()) errors[t / nf] = task_errors[t];

    const std::size_t ncls = classifiers.size(), nk = cardinalities.size();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    // scores[((cls * nk + k) * nc + config) * nf + fold]
    std::vector<double> scores(ncls * nk * nc * nf, nan);
    std::vector<std::string> eval_errors(scores.size());
    parallel_for(scores.size(), options.threads, [&](std::size_t task) {
        const std::size_t fold = task % nf;
        const std::size_t config = (task / nf) % nc;
        const std::size_t ki = (task / (nf * nc)) % nk;
        const std::size_t cls = task / (nf * nc * nk);
        const auto& ranking = rankings[config * nf + fold];
        if (!ranking) return;
        try {
            const auto pred = select_and_predict(fold_train[fold], fold_val[fold], *ranking, cardinalities[ki],
                                                 classifiers[cls]);
            scores[task] = balanced_accuracy(*fold_val[fold].labels, pred);
        } catch (const std::exception& e) {
            eval_errors[task] = e.what();
        }
    });

    std::vector<std::vector<GridResult>> out(ncls, std::vector<GridResult>(nk));
    for (std::size_t cls = 0; cls < ncls; ++cls) {
        for (std::size_t ki = 0; ki < nk; ++ki) {
            GridResult& result = out[cls][ki];
            std::optional<std::size_t> best;
            for (std::size_t c = 0; c < nc; ++c) {
                ConfigScore cs;
                cs.config = configs[c];
                cs.config.cardinality = cardinalities[ki];
                cs.error = errors[c];
                const std::size_t base = ((cls * nk + ki) * nc + c) * nf;
                double sum = 0.0;
                bool ok = cs.error.empty();
                for (std::size_t f = 0; f < nf; ++f) {
                    const double s = scores[base + f];
                    cs.fold_scores.push_back(s);
                    if (std::isnan(s)) {
                        ok = false;
                        if (cs.error.empty()) cs.error = eval_errors[base + f];
                    }
                    sum += s;
                }
                cs.cv_score = ok ? sum / static_cast<double>(nf) : nan;
                result.scores.push_back(cs);
                if (!ok) continue;
                if (!best) {
                    best = c;
                    continue;
                }
                const auto& incumbent = result.scores[*best];
                if (cs.cv_score > incumbent.cv_score ||
                    (cs.cv_score == incumbent.cv_score &&
                     cs.config.active_parameter_count() < incumbent.config.active_parameter_count()))
                    best = c;
            }
            if (!best)
                throw NumericError("every configuration failed during grid search: " + result.scores.front().error);
            result.best = result.scores[*best].config;
            result.cv_score = result.scores[*best].cv_score;
        }
    }
    return out;
}

GridResult grid_search(const FeatureMatrix& train, Method method, const ClassifierSpec& classifier,
                       std::size_t cardinality, const GridSearchOptions& options) {
    const std::size_t k[] = {cardinality};
    return grid_search_cells(train, method, std::span(&classifier, 1), k, options)[0][0];
}

Pipeline make_pipeline(const SelectionConfig& config, const ClassifierSpec& classifier) {
    config.validate();
    return [config, classifier](const FeatureMatrix& train, const FeatureMatrix& test) {
        const FeatureMatrix others[] = {test};
        const auto pruned = prune_constant_features(train, others);
        const auto ranking = rank_features(pruned.train, config);
        const auto pred = select_and_predict(pruned.train, pruned.others[0], ranking, config.cardinality, classifier);
        return balanced_accuracy(*test.labels, pred);
    };
}

std::string_view to_string(TTestFlag f) {
    switch (f) {
        case TTestFlag::none: return "none";
        case TTestFlag::degenerate: return "degenerate";
        case TTestFlag::infinite_statistic: return "infinite_statistic";
    }
    return "?";
}

TTestResult paired_ttest(std::span<const double> differences) {
    const std::size_t m = differences.size();
    if (m < 2) throw ValidationError("the paired t-test needs at least 2 differences");
    TTestResult r;
    r.differences.assign(differences.begin(), differences.end());
    r.degrees_of_freedom = static_cast<int>(m) - 1;
    const double count = static_cast<double>(m);
    r.mean_difference = std::accumulate(differences.begin(), differences.end(), 0.0) / count;
    double ss = 0.0;
    for (double d : differences) ss += (d - r.mean_difference) * (d - r.mean_difference);
    r.sigma = std::sqrt(ss / count);

    if (r.sigma == 0.0) {
        if (r.mean_difference == 0.0) {
            r.t_statistic = 0.0;
            r.p_value = 1.0;
            r.flag = TTestFlag::degenerate;
        } else {
            r.t_statistic = std::copysign(std::numeric_limits<double>::infinity(), r.mean_difference);
            r.p_value = 0.0;
            r.flag = TTestFlag::infinite_statistic;
        }
        return r;
    }
    r.t_statistic = std::sqrt(count) * r.mean_difference / r.sigma;
    const boost::math::students_t dist(static_cast<double>(r.degrees_of_freedom));
    r.p_value = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t_statistic))));
    return r;
}

TTestResult paired_cv_ttest(const Pipeline& a, const Pipeline& b, const FeatureMatrix& data,
                            std::size_t repetitions, std::uint64_t seed) {
    if (repetitions < 2) throw ValidationError("the cv t-test needs at least 2 repetitions");
    std::vector<double> diffs;
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
        const auto split = stratified_split(data, 0.5, seed + rep);
        const auto d1 = data.subset_rows(split.train_indices);
        const auto d2 = data.subset_rows(split.test_indices);
        diffs.push_back(a(d1, d2) - b(d1, d2));
        diffs.push_back(a(d2, d1) - b(d2, d1));
    }
    return paired_ttest(diffs);
}

}  // namespace tfs
