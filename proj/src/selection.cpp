#include "tfs/selection.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "tfs/error.hpp"

namespace tfs {

std::string_view to_string(Method m) { return m == Method::tfs ? "tfs" : "inffs"; }

Method parse_method(std::string_view s) {
    if (s == "tfs") return Method::tfs;
    if (s == "inffs") return Method::inffs;
    throw ValidationError("unknown method '" + std::string(s) + "' (expected tfs or inffs)");
}

void SelectionConfig::validate() const {
    if (cardinality == 0) throw ValidationError("cardinality k must be a positive integer");
    auto check_alpha = [&] {
        if (!alpha) throw ValidationError("alpha is required for this configuration");
        if (!(*alpha >= 0.0 && *alpha <= 1.0)) throw ValidationError("alpha must lie in [0, 1]");
    };
    if (method == Method::tfs) {
        if (theta) throw ValidationError("theta applies only to inffs");
        if (metric == Metric::energy) {
            if (squared) throw ValidationError("the energy metric cannot be squared (its matrix is never squared)");
            check_alpha();
        } else if (alpha) {
            throw ValidationError("alpha applies only to the energy metric or inffs");
        }
    } else {
        if (squared) throw ValidationError("the square flag applies only to tfs");
        check_alpha();
        if (!theta) throw ValidationError("inffs requires theta");
        if (!(*theta > 0.0 && *theta <= 1.0)) throw ValidationError("theta must lie in (0, 1]");
    }
}

int SelectionConfig::active_parameter_count() const {
    if (method == Method::inffs) return 2;
    return 1 + (squared ? 1 : 0) + (alpha ? 1 : 0);
}

std::string SelectionConfig::describe() const {
    std::ostringstream os;
    os << to_string(method);
    if (method == Method::tfs) {
        os << " metric=" << to_string(metric);
        if (squared) os << " squared";
    }
    if (alpha) os << " alpha=" << *alpha;
    if (theta) os << " theta=" << *theta;
    os << " k=" << cardinality;
    return os.str();
}

FeatureRanking rank_by_score(std::vector<double> scores) {
    FeatureRanking r;
    r.order.resize(scores.size());
    std::iota(r.order.begin(), r.order.end(), 0);
    std::stable_sort(r.order.begin(), r.order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    r.scores = std::move(scores);
    return r;
}

FeatureRanking tfs_rank_from_similarity(const SimilarityMatrix& c, TmfgGraph* graph_out) {
    TmfgGraph g = build_tmfg(c);
    const auto deg = degree_centrality(g);
    if (graph_out) *graph_out = std::move(g);
    return rank_by_score(std::vector<double>(deg.begin(), deg.end()));
}

FeatureRanking tfs_rank(const FeatureMatrix& x, const SelectionConfig& config) {
    config.validate();
    if (config.method != Method::tfs) throw ValidationError("tfs_rank called with a non-tfs config");
    if (x.features() < 4) throw ValidationError("tfs needs at least 4 features");
    return tfs_rank_from_similarity(similarity_matrix(x, config.metric, config.squared, config.alpha));
}

namespace {

std::vector<std::size_t> top_k(const FeatureRanking& r, std::size_t k) {
    if (k > r.order.size())
        throw ValidationError("cardinality k = " + std::to_string(k) + " exceeds the feature count " +
                              std::to_string(r.order.size()));
    return {r.order.begin(), r.order.begin() + static_cast<std::ptrdiff_t>(k)};
}

}  // namespace

std::vector<std::size_t> tfs_select(const FeatureMatrix& x, const SelectionConfig& config) {
    if (config.cardinality > x.features())
        throw ValidationError("cardinality k = " + std::to_string(config.cardinality) +
                              " exceeds the feature count " + std::to_string(x.features()));
    return top_k(tfs_rank(x, config), config.cardinality);
}

double spectral_radius(const Matrix& w) {
    const std::size_t n = w.rows();
    if (n == 0) return 0.0;
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
        w.data().data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Eigen::VectorXd v = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
    v.normalize();
    double lambda = 0.0;
    for (int it = 0; it < 200; ++it) {
        Eigen::VectorXd next = m * v;
        const double norm = next.norm();
        if (norm == 0.0) return 0.0;
        const double estimate = v.dot(next);  // Rayleigh quotient, |v| = 1
        next /= norm;
        const bool converged = it > 0 && std::abs(estimate - lambda) <= 1e-10 * std::abs(estimate);
        lambda = estimate;
        v = std::move(next);
        if (converged) break;
    }
    return std::abs(lambda);
}

FeatureRanking inffs_score_from_adjacency(const Matrix& w, double theta) {
    if (!(theta > 0.0 && theta <= 1.0)) throw ValidationError("theta must lie in (0, 1]");
    const std::size_t n = w.rows();
    if (w.cols() != n) throw ValidationError("adjacency must be square");
    const double r = theta / (spectral_radius(w) + kSpectralEpsilon);

    using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const auto sn = static_cast<Eigen::Index>(n);
    Eigen::Map<const RowMat> m(w.data().data(), sn, sn);
    const RowMat a = RowMat::Identity(sn, sn) - r * m;

    // row sums of (I - rW)^-1 - I, via one solve against the ones vector
    Eigen::PartialPivLU<RowMat> lu(a);
    if (!(lu.rcond() > 1e-14)) throw NumericError("I - rW is singular; inffs scores are undefined");
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(sn);
    const Eigen::VectorXd x = lu.solve(ones);
    std::vector<double> scores(n);
    double largest = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        scores[i] = x(static_cast<Eigen::Index>(i)) - 1.0;
        if (!std::isfinite(scores[i])) throw NumericError("inffs produced non-finite scores");
        largest = std::max(largest, std::abs(scores[i]));
    }
    // For W >= 0 every term of the path series is >= 0. A clearly negative
    // score means r * rho(W) >= 1, i.e. the spectral radius estimate fell
    // short by more than the regulariser.
    const bool nonnegative = std::all_of(w.data().begin(), w.data().end(), [](double v) { return v >= 0.0; });
    if (nonnegative) {
        for (double s : scores)
            if (s < -1e-9 * (1.0 + largest))
                throw NumericError("inffs path series diverges for theta = " + std::to_string(theta) +
                                   " (spectral radius estimate too coarse)");
    }
    return rank_by_score(std::move(scores));
}

FeatureRanking inffs_score(const FeatureMatrix& x, double alpha, double theta) {
    if (x.features() < 2) throw ValidationError("inffs needs at least 2 features");
    return inffs_score_from_adjacency(energy_matrix(x, alpha).values, theta);
}

std::vector<std::size_t> inffs_select(const FeatureMatrix& x, double alpha, double theta, std::size_t k) {
    if (k > x.features())
        throw ValidationError("cardinality k = " + std::to_string(k) + " exceeds the feature count " +
                              std::to_string(x.features()));
    return top_k(inffs_score(x, alpha, theta), k);
}

FeatureRanking rank_features(const FeatureMatrix& x, const SelectionConfig& config) {
    config.validate();
    if (config.method == Method::tfs) return tfs_rank(x, config);
    return inffs_score(x, *config.alpha, *config.theta);
}

}  // namespace tfs
