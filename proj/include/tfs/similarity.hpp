#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tfs/dataset.hpp"
#include "tfs/matrix.hpp"

namespace tfs {

enum class Metric { pearson, spearman, energy };

std::string_view to_string(Metric m);
Metric parse_metric(std::string_view s);

// n x n feature-feature similarity. Entry (j, i) is a copy of (i, j); it is
// never recomputed, so the matrix is exactly symmetric.
struct SimilarityMatrix {
    Matrix values;
    Metric metric = Metric::pearson;
    bool squared = false;
    std::optional<double> alpha;

    std::size_t size() const noexcept { return values.rows(); }
};

// Average ranks (1-based); tied values share the mean of the positions
// they span.
std::vector<double> rank_average(std::span<const double> x);

SimilarityMatrix pearson_matrix(const FeatureMatrix& x);
SimilarityMatrix spearman_matrix(const FeatureMatrix& x);

// phi = alpha * max(sd_i, sd_j) + (1 - alpha) * (1 - |spearman_ij|), with the
// standard deviations taken on min-max normalised columns. Diagonal is 0.
SimilarityMatrix energy_matrix(const FeatureMatrix& x, double alpha);

// Elementwise square. Energy matrices are rejected.
SimilarityMatrix apply_square(SimilarityMatrix s);

// Metric dispatch used by the selectors and the CLI.
SimilarityMatrix similarity_matrix(const FeatureMatrix& x, Metric metric, bool squared,
                                   std::optional<double> alpha);

// Pearson correlation of every pair of rows of `rows` (each row one
// variable). Shared by the Pearson and Spearman paths.
Matrix row_correlations(const Matrix& rows);

void write_similarity_csv(const SimilarityMatrix& s, std::span<const std::string> names,
                          const std::string& path);

}  // namespace tfs
