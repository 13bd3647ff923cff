#include "tfs/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tfs/error.hpp"
#include "tfs/random.hpp"
#include "tfs/simd/kernels.hpp"

namespace tfs {

std::string_view to_string(ClassifierKind k) {
    switch (k) {
        case ClassifierKind::knn: return "knn";
        case ClassifierKind::decision_tree: return "decision_tree";
        case ClassifierKind::linear_svm: return "linear_svm";
    }
    return "?";
}

ClassifierKind parse_classifier(std::string_view s) {
    if (s == "knn") return ClassifierKind::knn;
    if (s == "decision_tree" || s == "tree") return ClassifierKind::decision_tree;
    if (s == "linear_svm" || s == "svm") return ClassifierKind::linear_svm;
    throw ValidationError("unknown classifier '" + std::string(s) +
                          "' (expected knn, decision_tree or linear_svm)");
}

namespace {

std::vector<int> predict_knn(const ClassifierSpec& spec, const FeatureMatrix& train, const FeatureMatrix& test) {
    if (spec.knn_k < 1) throw ValidationError("knn_k must be positive");
    const auto& labels = *train.labels;
    const std::size_t n_train = train.samples();
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(spec.knn_k), n_train);
    const std::size_t num_classes = train.num_classes();

    std::vector<std::pair<double, std::size_t>> dist(n_train);
    std::vector<int> out(test.samples());
    std::vector<int> votes(num_classes);
    std::vector<std::size_t> first_rank(num_classes);
    for (std::size_t i = 0; i < test.samples(); ++i) {
        const auto q = test.values.row(i);
        for (std::size_t j = 0; j < n_train; ++j) dist[j] = {simd::squared_distance(q, train.values.row(j)), j};
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());

        std::fill(votes.begin(), votes.end(), 0);
        std::fill(first_rank.begin(), first_rank.end(), std::numeric_limits<std::size_t>::max());
        for (std::size_t r = 0; r < k; ++r) {
            const int c = labels[dist[r].second];
            ++votes[c];
            first_rank[c] = std::min(first_rank[c], r);
        }
        int best = -1;
        for (std::size_t c = 0; c < num_classes; ++c) {
            if (votes[c] == 0) continue;
            if (best < 0 || votes[c] > votes[best] || (votes[c] == votes[best] && first_rank[c] < first_rank[best]))
                best = static_cast<int>(c);
        }
        out[i] = best;
    }
    return out;
}

// ---------------------------------------------------------------- CART

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1, right = -1;
    int label = 0;
};

int majority(const std::vector<long>& counts) {
    return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

std::vector<TreeNode> grow_tree(const FeatureMatrix& train) {
    const auto& labels = *train.labels;
    const std::size_t k = train.num_classes();
    const std::size_t d = train.features();

    std::vector<TreeNode> nodes;
    struct Pending {
        int node;
        std::vector<std::size_t> samples;
    };
    std::vector<Pending> stack;
    std::vector<std::size_t> all(train.samples());
    std::iota(all.begin(), all.end(), 0);
    nodes.emplace_back();
    stack.push_back({0, std::move(all)});

    std::vector<long> left_counts(k), right_counts(k), counts(k);
    std::vector<std::size_t> sorted;
    while (!stack.empty()) {
        Pending job = std::move(stack.back());
        stack.pop_back();
        const auto& idx = job.samples;

        std::fill(counts.begin(), counts.end(), 0);
        for (auto i : idx) ++counts[labels[i]];
        nodes[job.node].label = majority(counts);
        const bool pure = std::count_if(counts.begin(), counts.end(), [](long c) { return c > 0; }) <= 1;
        if (pure || idx.size() < 2) continue;

        // Minimising weighted Gini is maximising sum_c l_c^2/n_l + r_c^2/n_r.
        double best_score = -1.0;
        int best_feature = -1;
        double best_threshold = 0.0;
        const double total = static_cast<double>(idx.size());
        for (std::size_t f = 0; f < d; ++f) {
            sorted = idx;
            std::stable_sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
                return train.values(a, f) < train.values(b, f);
            });
            if (train.values(sorted.front(), f) == train.values(sorted.back(), f)) continue;

            std::fill(left_counts.begin(), left_counts.end(), 0);
            right_counts = counts;
            double left_sq = 0.0, right_sq = 0.0;
            for (long c : right_counts) right_sq += static_cast<double>(c) * static_cast<double>(c);
            for (std::size_t p = 0; p + 1 < sorted.size(); ++p) {
                const int c = labels[sorted[p]];
                const double l = static_cast<double>(left_counts[c]);
                const double r = static_cast<double>(right_counts[c]);
                left_sq += 2.0 * l + 1.0;
                right_sq -= 2.0 * r - 1.0;
                ++left_counts[c];
                --right_counts[c];
                const double lo = train.values(sorted[p], f), hi = train.values(sorted[p + 1], f);
                if (lo == hi) continue;
                const double n_left = static_cast<double>(p + 1);
                const double score = left_sq / n_left + right_sq / (total - n_left);
                if (score > best_score) {
                    best_score = score;
                    best_feature = static_cast<int>(f);
                    double mid = lo + (hi - lo) / 2.0;
                    if (mid >= hi) mid = lo;
                    best_threshold = mid;
                }
            }
        }
        if (best_feature < 0) continue;

        std::vector<std::size_t> go_left, go_right;
        for (auto i : idx)
            (train.values(i, best_feature) <= best_threshold ? go_left : go_right).push_back(i);
        const int l = static_cast<int>(nodes.size());
        nodes.emplace_back();
        nodes.emplace_back();
        nodes[job.node].feature = best_feature;
        nodes[job.node].threshold = best_threshold;
        nodes[job.node].left = l;
        nodes[job.node].right = l + 1;
        stack.push_back({l + 1, std::move(go_right)});
        stack.push_back({l, std::move(go_left)});
    }
    return nodes;
}

std::vector<int> predict_tree(const FeatureMatrix& train, const FeatureMatrix& test) {
    const auto nodes = grow_tree(train);
    std::vector<int> out(test.samples());
    for (std::size_t i = 0; i < test.samples(); ++i) {
        int at = 0;
        while (nodes[at].feature >= 0)
            at = test.values(i, nodes[at].feature) <= nodes[at].threshold ? nodes[at].left : nodes[at].right;
        out[i] = nodes[at].label;
    }
    return out;
}

// ---------------------------------------------------------------- linear SVM

Matrix with_bias(const Matrix& x) {
    Matrix out(x.rows(), x.cols() + 1);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const auto src = x.row(r);
        auto dst = out.row(r);
        std::copy(src.begin(), src.end(), dst.begin());
        dst[x.cols()] = 1.0;
    }
    return out;
}

std::vector<double> solve_squared_hinge(const Matrix& xb, const std::vector<int>& y, double c, int max_iter,
                                        double tol, std::uint64_t seed) {
    const std::size_t n = xb.rows(), d = xb.cols();
    const double diag = 0.5 / c;
    std::vector<double> w(d, 0.0), alpha(n, 0.0), qd(n);
    for (std::size_t i = 0; i < n; ++i) qd[i] = simd::dot(xb.row(i), xb.row(i)) + diag;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    for (int iter = 0; iter < max_iter; ++iter) {
        shuffle(std::span<std::size_t>(order), rng);
        double pg_max = -std::numeric_limits<double>::infinity();
        double pg_min = std::numeric_limits<double>::infinity();
        for (auto i : order) {
            const double yi = static_cast<double>(y[i]);
            const double grad = yi * simd::dot(w, xb.row(i)) - 1.0 + diag * alpha[i];
            const double pg = alpha[i] == 0.0 ? std::min(grad, 0.0) : grad;
            pg_max = std::max(pg_max, pg);
            pg_min = std::min(pg_min, pg);
            if (std::abs(pg) > 1e-12) {
                const double old = alpha[i];
                alpha[i] = std::max(old - grad / qd[i], 0.0);
                simd::axpy((alpha[i] - old) * yi, xb.row(i), w);
            }
        }
        if (pg_max - pg_min <= tol) break;
    }
    return w;
}

std::vector<int> predict_svm(const ClassifierSpec& spec, const FeatureMatrix& train, const FeatureMatrix& test) {
    const auto& labels = *train.labels;
    const std::size_t k = train.num_classes();
    const Matrix xb = with_bias(train.values);
    std::vector<std::vector<double>> models(k);
    std::vector<bool> present(k, false);
    for (int l : labels) present[l] = true;
    for (std::size_t c = 0; c < k; ++c) {
        if (!present[c]) continue;
        std::vector<int> y(labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i) y[i] = labels[i] == static_cast<int>(c) ? 1 : -1;
        models[c] = solve_squared_hinge(xb, y, spec.svm_c, spec.svm_max_iter, spec.svm_tol, spec.seed);
    }
    const Matrix tb = with_bias(test.values);
    std::vector<int> out(test.samples());
    for (std::size_t i = 0; i < test.samples(); ++i) {
        int best = -1;
        double best_value = -std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            if (!present[c]) continue;
            const double v = simd::dot(models[c], tb.row(i));
            if (best < 0 || v > best_value) {
                best = static_cast<int>(c);
                best_value = v;
            }
        }
        out[i] = best;
    }
    return out;
}

}  // namespace

std::vector<double> train_linear_svm_binary(const Matrix& x, const std::vector<int>& y, double c, int max_iter,
                                            double tol, std::uint64_t seed) {
    if (x.rows() != y.size()) throw ValidationError("label count does not match sample count");
    return solve_squared_hinge(with_bias(x), y, c, max_iter, tol, seed);
}

std::vector<int> fit_predict(const ClassifierSpec& spec, const FeatureMatrix& train, const FeatureMatrix& test) {
    if (!train.has_labels()) throw ValidationError("training data has no labels");
    if (train.samples() == 0) throw ValidationError("training set is empty");
    if (test.features() != train.features())
        throw ValidationError("test feature count " + std::to_string(test.features()) +
                              " does not match training feature count " + std::to_string(train.features()));

    const auto& labels = *train.labels;
    if (std::all_of(labels.begin(), labels.end(), [&](int l) { return l == labels.front(); }))
        return std::vector<int>(test.samples(), labels.front());

    switch (spec.kind) {
        case ClassifierKind::knn: return predict_knn(spec, train, test);
        case ClassifierKind::decision_tree: return predict_tree(train, test);
        case ClassifierKind::linear_svm: return predict_svm(spec, train, test);
    }
    throw ValidationError("unknown classifier kind");
}

}  // namespace tfs
