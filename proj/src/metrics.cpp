#include "tfs/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "tfs/error.hpp"

namespace tfs {

ConfusionSummary ConfusionSummary::from(std::span<const int> y, std::span<const int> y_pred) {
    if (y.size() != y_pred.size()) throw ValidationError("label vectors differ in length");
    if (y.empty()) throw ValidationError("metrics need at least one sample");
    int max_label = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] < 0 || y_pred[i] < 0) throw ValidationError("class ids must be non-negative");
        max_label = std::max({max_label, y[i], y_pred[i]});
    }
    ConfusionSummary s;
    s.num_classes = static_cast<std::size_t>(max_label) + 1;
    const std::size_t k = s.num_classes;
    s.tp.assign(k, 0);
    s.tn.assign(k, 0);
    s.fp.assign(k, 0);
    s.fn.assign(k, 0);
    s.true_counts.assign(k, 0);
    s.predicted_counts.assign(k, 0);
    s.total = static_cast<long>(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        ++s.true_counts[y[i]];
        ++s.predicted_counts[y_pred[i]];
        if (y[i] == y_pred[i]) {
            ++s.tp[y[i]];
            ++s.correct;
        } else {
            ++s.fn[y[i]];
            ++s.fp[y_pred[i]];
        }
    }
    for (std::size_t z = 0; z < k; ++z) s.tn[z] = s.total - s.tp[z] - s.fn[z] - s.fp[z];
    return s;
}

double balanced_accuracy(std::span<const int> y, std::span<const int> y_pred) {
    const auto s = ConfusionSummary::from(y, y_pred);
    double sum = 0.0;
    int classes = 0;
    for (std::size_t z = 0; z < s.num_classes; ++z) {
        if (s.true_counts[z] == 0) continue;
        sum += static_cast<double>(s.tp[z]) / static_cast<double>(s.tp[z] + s.fn[z]);
        ++classes;
    }
    return sum / classes;
}

F1Scores f1_scores(std::span<const int> y, std::span<const int> y_pred) {
    const auto s = ConfusionSummary::from(y, y_pred);
    double precision_sum = 0.0, recall_sum = 0.0, f1_sum = 0.0;
    int classes = 0;
    for (std::size_t z = 0; z < s.num_classes; ++z) {
        if (s.true_counts[z] == 0 && s.predicted_counts[z] == 0) continue;
        ++classes;
        const double tp = static_cast<double>(s.tp[z]);
        const double p = s.predicted_counts[z] > 0 ? tp / static_cast<double>(s.predicted_counts[z]) : 0.0;
        const double r = s.true_counts[z] > 0 ? tp / static_cast<double>(s.true_counts[z]) : 0.0;
        precision_sum += p;
        recall_sum += r;
        f1_sum += (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
    }
    const double macro_p = precision_sum / classes;
    const double macro_r = recall_sum / classes;
    const double paper = (macro_p + macro_r) > 0.0 ? 2.0 * macro_p * macro_r / (macro_p + macro_r) : 0.0;
    return {paper, f1_sum / classes};
}

MccResult mcc_detailed(std::span<const int> y, std::span<const int> y_pred) {
    const auto s = ConfusionSummary::from(y, y_pred);
    double tp_dot = 0.0, pp = 0.0, tt = 0.0;
    for (std::size_t z = 0; z < s.num_classes; ++z) {
        const double t = static_cast<double>(s.true_counts[z]);
        const double p = static_cast<double>(s.predicted_counts[z]);
        tp_dot += t * p;
        pp += p * p;
        tt += t * t;
    }
    const double total = static_cast<double>(s.total);
    const double numerator = static_cast<double>(s.correct) * total - tp_dot;
    const double denominator = std::sqrt(total * total - pp) * std::sqrt(total * total - tt);
    if (denominator == 0.0) return {0.0, true};
    return {numerator / denominator, false};
}

}  // namespace tfs
