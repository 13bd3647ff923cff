#include "tfs/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "tfs/error.hpp"
#include "tfs/simd/kernels.hpp"

namespace tfs {

std::string_view to_string(Metric m) {
    switch (m) {
        case Metric::pearson: return "pearson";
        case Metric::spearman: return "spearman";
        case Metric::energy: return "energy";
    }
    return "?";
}

Metric parse_metric(std::string_view s) {
    if (s == "pearson") return Metric::pearson;
    if (s == "spearman") return Metric::spearman;
    if (s == "energy") return Metric::energy;
    throw ValidationError("unknown metric '" + std::string(s) + "' (expected pearson, spearman or energy)");
}

std::vector<double> rank_average(std::span<const double> x) {
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(x.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
        // positions i..j (0-based) hold ranks i+1..j+1
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t p = i; p <= j; ++p) ranks[order[p]] = avg;
        i = j + 1;
    }
    return ranks;
}

Matrix row_correlations(const Matrix& rows) {
    const std::size_t n = rows.rows(), s = rows.cols();
    if (s < 2) throw ValidationError("correlation needs at least 2 samples");

    // Centre each variable and scale it to unit Euclidean norm; the
    // correlation is then a plain dot product.
    Matrix unit(n, s);
    for (std::size_t i = 0; i < n; ++i) {
        const auto src = rows.row(i);
        const double mean = std::accumulate(src.begin(), src.end(), 0.0) / static_cast<double>(s);
        auto dst = unit.row(i);
        double ss = 0.0;
        for (std::size_t t = 0; t < s; ++t) {
            dst[t] = src[t] - mean;
            ss += dst[t] * dst[t];
        }
        if (!(ss > 0.0)) throw ValidationError("variable " + std::to_string(i) + " has zero variance");
        const double inv = 1.0 / std::sqrt(ss);
        for (auto& v : dst) v *= inv;
    }

    // Tiled so the mirrored writes stay within a few cache lines.
    constexpr std::size_t tile = 64;
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
    for (std::size_t ib = 0; ib < n; ib += tile) {
        const std::size_t ie = std::min(n, ib + tile);
        for (std::size_t jb = ib; jb < n; jb += tile) {
            const std::size_t je = std::min(n, jb + tile);
            for (std::size_t i = ib; i < ie; ++i) {
                const auto ri = unit.row(i);
                for (std::size_t j = std::max(jb, i + 1); j < je; ++j) {
                    const double r = std::clamp(simd::dot(ri, unit.row(j)), -1.0, 1.0);
                    out(i, j) = r;
                    out(j, i) = r;
                }
            }
        }
    }
    return out;
}

SimilarityMatrix pearson_matrix(const FeatureMatrix& x) {
    return {row_correlations(x.values.transposed()), Metric::pearson, false, std::nullopt};
}

namespace {

Matrix rank_rows(const FeatureMatrix& x) {
    Matrix ranks(x.features(), x.samples());
    for (std::size_t j = 0; j < x.features(); ++j) {
        const auto r = rank_average(x.column(j));
        std::copy(r.begin(), r.end(), ranks.row(j).begin());
    }
    return ranks;
}

}  // namespace

SimilarityMatrix spearman_matrix(const FeatureMatrix& x) {
    return {row_correlations(rank_rows(x)), Metric::spearman, false, std::nullopt};
}

SimilarityMatrix energy_matrix(const FeatureMatrix& x, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("alpha must lie in [0, 1]");
    const std::size_t n = x.features();

    std::vector<double> spread(n);
    for (std::size_t j = 0; j < n; ++j) {
        auto col = x.column(j);
        const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
        const double mn = *lo, range = *hi - *lo;
        if (!(range > 0.0))
            throw ValidationError("feature '" + x.feature_names[j] + "' is constant; cannot min-max normalise");
        for (auto& v : col) v = (v - mn) / range;
        spread[j] = population_std(col);
    }

    const Matrix rho = row_correlations(rank_rows(x));
    SimilarityMatrix out{Matrix(n, n), Metric::energy, false, alpha};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double e = std::max(spread[i], spread[j]);
            const double phi = alpha * e + (1.0 - alpha) * (1.0 - std::abs(rho(i, j)));
            out.values(i, j) = phi;
            out.values(j, i) = phi;
        }
    }
    return out;
}

SimilarityMatrix apply_square(SimilarityMatrix s) {
    if (s.metric == Metric::energy) throw ValidationError("energy similarity matrices are never squared");
    for (auto& v : s.values.data()) v *= v;
    s.squared = true;
    return s;
}

SimilarityMatrix similarity_matrix(const FeatureMatrix& x, Metric metric, bool squared,
                                   std::optional<double> alpha) {
    switch (metric) {
        case Metric::pearson:
        case Metric::spearman: {
            if (alpha) throw ValidationError("alpha applies only to the energy metric");
            auto s = metric == Metric::pearson ? pearson_matrix(x) : spearman_matrix(x);
            return squared ? apply_square(std::move(s)) : s;
        }
        case Metric::energy:
            if (squared) throw ValidationError("energy similarity matrices are never squared");
            if (!alpha) throw ValidationError("the energy metric requires alpha");
            return energy_matrix(x, *alpha);
    }
    throw ValidationError("unknown metric");
}

void write_similarity_csv(const SimilarityMatrix& s, std::span<const std::string> names,
                          const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    char buf[32];
    for (const auto& name : names) out << ',' << name;
    out << '\n';
    for (std::size_t i = 0; i < s.size(); ++i) {
        out << names[i];
        for (std::size_t j = 0; j < s.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", s.values(i, j));
            out << ',' << buf;
        }
        out << '\n';
    }
    if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace tfs
