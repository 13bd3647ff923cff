#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tfs/dataset.hpp"
#include "tfs/similarity.hpp"
#include "tfs/tmfg.hpp"

namespace tfs {

enum class Method { tfs, inffs };

std::string_view to_string(Method m);
Method parse_method(std::string_view s);

struct SelectionConfig {
    Method method = Method::tfs;
    Metric metric = Metric::pearson;  // tfs only
    bool squared = false;             // tfs only, never with energy
    std::optional<double> alpha;      // tfs+energy, inffs
    std::optional<double> theta;      // inffs only
    std::size_t cardinality = 10;

    // Throws ValidationError naming the broken rule.
    void validate() const;

    // Hyper-parameters that are switched on: metric and alpha count when
    // present, the square flag only when set, theta always for inffs.
    int active_parameter_count() const;

    std::string describe() const;
};

struct FeatureRanking {
    std::vector<std::size_t> order;  // descending score, ascending index on ties
    std::vector<double> scores;      // by feature index
    std::string tie_rule = "descending score, ties by ascending feature index";
};

// Stable descending argsort.
FeatureRanking rank_by_score(std::vector<double> scores);

FeatureRanking tfs_rank(const FeatureMatrix& x, const SelectionConfig& config);
std::vector<std::size_t> tfs_select(const FeatureMatrix& x, const SelectionConfig& config);

// Ranking from a prebuilt similarity matrix. Also returns the graph.
FeatureRanking tfs_rank_from_similarity(const SimilarityMatrix& c, TmfgGraph* graph_out = nullptr);

inline constexpr double kSpectralEpsilon = 1e-12;

// Largest eigenvalue by power iteration from the all-ones vector
// (200 iterations or relative change below 1e-10).
double spectral_radius(const Matrix& w);

// score_i = sum_j [(I - rW)^-1 - I]_ij with r = theta / (rho(W) + eps).
FeatureRanking inffs_score_from_adjacency(const Matrix& w, double theta);
FeatureRanking inffs_score(const FeatureMatrix& x, double alpha, double theta);
std::vector<std::size_t> inffs_select(const FeatureMatrix& x, double alpha, double theta, std::size_t k);

// Dispatch on config.method; validates the config first.
FeatureRanking rank_features(const FeatureMatrix& x, const SelectionConfig& config);

}  // namespace tfs
