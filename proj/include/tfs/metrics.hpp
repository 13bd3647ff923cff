#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tfs {

// One-vs-rest counts for every class id in [0, num_classes).
struct ConfusionSummary {
    std::size_t num_classes = 0;
    std::vector<long> tp, tn, fp, fn;
    std::vector<long> true_counts;       // T
    std::vector<long> predicted_counts;  // P
    long correct = 0;                    // C
    long total = 0;                      // S

    static ConfusionSummary from(std::span<const int> y, std::span<const int> y_pred);
};

// Macro-averaged recall over the classes present in y.
double balanced_accuracy(std::span<const int> y, std::span<const int> y_pred);

struct F1Scores {
    double f1_paper;  // harmonic mean of macro precision and macro recall
    double f1_macro;  // mean of the per-class F1 values
};

// Classes are those present in y or y_pred. A class never predicted has
// precision 0.
F1Scores f1_scores(std::span<const int> y, std::span<const int> y_pred);

struct MccResult {
    double value;
    bool degenerate;  // zero denominator, value forced to 0
};

// (C*S - T.P) / (sqrt(S^2 - P.P) * sqrt(S^2 - T.T))
MccResult mcc_detailed(std::span<const int> y, std::span<const int> y_pred);
inline double mcc(std::span<const int> y, std::span<const int> y_pred) {
    return mcc_detailed(y, y_pred).value;
}

}  // namespace tfs
