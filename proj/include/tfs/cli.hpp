#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tfs/classifiers.hpp"
#include "tfs/model_selection.hpp"

namespace tfs::cli {

// Everything that determines an evaluation run. Echoed verbatim into every
// report it produces.
struct RunConfig {
    std::string dataset;
    std::optional<std::string> label_column;
    std::optional<std::string> provided_test;  // use this file as the test set
    double test_fraction = 0.3;
    std::vector<Method> methods{Method::tfs, Method::inffs};
    GridSpec grid = GridSpec::defaults();
    std::vector<std::size_t> cardinalities{10, 50, 100, 150, 200};
    std::vector<ClassifierKind> classifiers{ClassifierKind::linear_svm, ClassifierKind::knn,
                                            ClassifierKind::decision_tree};
    std::size_t cv_k = 3;
    std::uint64_t seed = 0;
    std::size_t ttest_repetitions = 0;  // 0 disables the paired t-test
    std::string output_dir = ".";
};

RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& c);

struct EvaluationReport {
    nlohmann::json document;
    std::string csv;
};

// split -> prune -> per-cell grid search -> refit on train -> test metrics.
// A cell that fails is reported with status "failed" and its error.
EvaluationReport run_evaluation(const RunConfig& config, std::size_t threads = 1);

ClassifierSpec classifier_spec(ClassifierKind kind, std::uint64_t seed);

// Entry point of the `tfs` executable. Exit codes: 0 success,
// 1 IO/environment failure, 2 validation failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tfs::cli
