#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tfs/matrix.hpp"

namespace tfs {

// Samples x features table. Labels are stored as indices into class_names,
// which is sorted (numerically when every label parses as a number).
struct FeatureMatrix {
    Matrix values;
    std::vector<std::string> feature_names;
    std::optional<std::vector<int>> labels;
    std::vector<std::string> class_names;

    std::size_t samples() const noexcept { return values.rows(); }
    std::size_t features() const noexcept { return values.cols(); }
    std::size_t num_classes() const noexcept { return class_names.size(); }
    bool has_labels() const noexcept { return labels.has_value(); }

    // Throws ValidationError on non-finite values, duplicate names or
    // out-of-range labels.
    void validate() const;

    FeatureMatrix subset_rows(std::span<const std::size_t> rows) const;
    FeatureMatrix subset_columns(std::span<const std::size_t> cols) const;

    // Feature j as a contiguous vector.
    std::vector<double> column(std::size_t j) const;
};

struct SplitResult {
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
    std::uint64_t seed = 0;
};

struct Fold {
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> validation_indices;
};

struct Standardizer {
    std::vector<double> means;
    std::vector<double> std_devs;
};

// Header row required. Throws IoError for a missing file or bad cell,
// ValidationError for duplicate headers or a missing label column.
FeatureMatrix load_csv(const std::filesystem::path& path,
                       const std::optional<std::string>& label_column = std::nullopt);

FeatureMatrix parse_csv(std::string_view text,
                        const std::optional<std::string>& label_column = std::nullopt,
                        std::string_view source = "<memory>");

// Class-stratified train/test partition of round(S * fraction) test rows,
// apportioned over the classes by largest remainder (ties to the earlier
// class). Index lists are returned sorted.
SplitResult stratified_split(const FeatureMatrix& data, double test_fraction, std::uint64_t seed);

struct PruneResult {
    FeatureMatrix train;
    std::vector<FeatureMatrix> others;
    std::vector<std::size_t> kept_indices;
};

// Removes every feature whose training values are all identical.
PruneResult prune_constant_features(const FeatureMatrix& train,
                                    std::span<const FeatureMatrix> others = {});

// Indices of features that are not constant in `data`.
std::vector<std::size_t> non_constant_features(const Matrix& data);

Standardizer fit_standardizer(const FeatureMatrix& train);
FeatureMatrix apply_standardizer(const Standardizer& s, const FeatureMatrix& data);

// k stratified folds. Fold sizes differ by at most one; each class count per
// fold is the floor or ceiling of its proportional share. Class members are
// shuffled before being dealt to the folds.
std::vector<Fold> stratified_kfold(const FeatureMatrix& data, std::size_t k, std::uint64_t seed);

// Population standard deviation (divides by S).
double population_std(std::span<const double> x);

}  // namespace tfs
