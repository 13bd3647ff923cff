#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "tfs/dataset.hpp"

namespace tfs {

enum class ClassifierKind { knn, decision_tree, linear_svm };

std::string_view to_string(ClassifierKind k);
ClassifierKind parse_classifier(std::string_view s);

struct ClassifierSpec {
    ClassifierKind kind = ClassifierKind::knn;
    int knn_k = 5;
    double svm_c = 1.0;
    int svm_max_iter = 50000;
    double svm_tol = 1e-4;
    std::uint64_t seed = 0;
};

// Fits on `train` (labels required) and returns class ids for every row of
// `test`. Deterministic for a fixed spec.
//   knn:           Euclidean distance; neighbours ordered by (distance, train
//                  index); vote ties go to the class of the nearest tied
//                  neighbour.
//   decision_tree: CART, Gini impurity, grown until leaves are pure or no
//                  feature varies; thresholds at midpoints of consecutive
//                  distinct values; ties go to the smaller feature index,
//                  then the smaller threshold.
//   linear_svm:    one-vs-rest, L2-regularised squared hinge with a bias
//                  feature, solved by dual coordinate descent; the largest
//                  decision value wins, ties to the smaller class id.
std::vector<int> fit_predict(const ClassifierSpec& spec, const FeatureMatrix& train, const FeatureMatrix& test);

// Exposed for tests: one binary squared-hinge model, labels in {-1, +1}.
// Returns weights with the bias as the last entry.
std::vector<double> train_linear_svm_binary(const Matrix& x, const std::vector<int>& y, double c,
                                            int max_iter, double tol, std::uint64_t seed);

}  // namespace tfs
