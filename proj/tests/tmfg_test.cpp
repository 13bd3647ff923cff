#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "tfs/error.hpp"
#include "tfs/tmfg.hpp"

namespace {

using namespace tfs;

SimilarityMatrix wrap(Matrix m) {
    SimilarityMatrix s;
    s.values = std::move(m);
    return s;
}

// K4 on {0,1,2,3} with weight 0.9; vertex 4 has 0.8 to {0,1,2} and 0.1 to 3.
SimilarityMatrix five_vertex() {
    Matrix m(5, 5, 0.9);
    for (int i = 0; i < 5; ++i) m(i, i) = 1.0;
    for (int j : {0, 1, 2}) m(4, j) = m(j, 4) = 0.8;
    m(4, 3) = m(3, 4) = 0.1;
    return wrap(m);
}

void expect_valid(const TmfgGraph& g) {
    const std::size_t n = g.n;
    EXPECT_EQ(g.edge_count(), 3 * n - 6);
    EXPECT_TRUE(is_connected(g));
    EXPECT_TRUE(is_chordal(g));
    EXPECT_EQ(g.cliques.size(), n - 3);
    EXPECT_EQ(g.separators.size(), n - 4);
    EXPECT_EQ(g.insertion_log.size(), n - 4);
    EXPECT_EQ(g.triangles.size(), 2 * n - 4);
    for (std::size_t v = 0; v < n; ++v) {
        EXPECT_FALSE(g.adjacent(static_cast<int>(v), static_cast<int>(v)));
        for (std::size_t u = 0; u < n; ++u)
            EXPECT_EQ(g.adjacent(static_cast<int>(v), static_cast<int>(u)),
                      g.adjacent(static_cast<int>(u), static_cast<int>(v)));
    }
    for (const auto& s : g.separators) {
        int containing = 0;
        for (const auto& c : g.cliques)
            containing += std::includes(c.begin(), c.end(), s.begin(), s.end());
        EXPECT_EQ(containing, 2);
    }
    const auto deg = degree_centrality(g);
    EXPECT_EQ(std::accumulate(deg.begin(), deg.end(), 0), static_cast<int>(6 * n - 12));
}

TEST(Tetrahedron, ForcedAndDerived) {
    EXPECT_EQ(select_initial_tetrahedron(wrap(oracle::random_symmetric(4, 1))), (Tetrahedron{0, 1, 2, 3}));
    EXPECT_EQ(select_initial_tetrahedron(five_vertex()), (Tetrahedron{0, 1, 2, 3}));
}

TEST(Tetrahedron, TiesGoToTheSmallerSet) {
    EXPECT_EQ(select_initial_tetrahedron(wrap(Matrix(6, 6, 0.5))), (Tetrahedron{0, 1, 2, 3}));
    // {1,2,3,4} and {2,3,4,5} would both be optimal without vertex 0
    Matrix m(6, 6, 0.1);
    for (int i : {1, 2, 3, 4, 5})
        for (int j : {1, 2, 3, 4, 5}) m(i, j) = 0.7;
    EXPECT_EQ(select_initial_tetrahedron(wrap(m)), (Tetrahedron{1, 2, 3, 4}));
}

TEST(Tetrahedron, TooSmall) {
    EXPECT_THROW(select_initial_tetrahedron(wrap(Matrix(3, 3, 1.0))), ValidationError);
    EXPECT_THROW(build_tmfg(wrap(Matrix(3, 3, 1.0))), ValidationError);
}

TEST(MaximumGain, Cases) {
    const auto c = five_vertex();
    const std::vector<Triangle> t{{0, 1, 2}, {0, 1, 3}};
    const auto g = maximum_gain(c, t, {4});
    EXPECT_EQ(g.vertex, 4);
    EXPECT_EQ(g.triangle, (Triangle{0, 1, 2}));
    EXPECT_NEAR(g.gain, 2.4, 1e-15);

    const auto forced = maximum_gain(c, {{0, 1, 3}}, {4});
    EXPECT_EQ(forced.triangle, (Triangle{0, 1, 3}));
    EXPECT_DOUBLE_EQ(forced.gain, 1.7);

    const auto flat = wrap(Matrix(6, 6, 0.3));
    const auto tie = maximum_gain(flat, {{1, 2, 3}, {0, 1, 2}}, {5, 4});
    EXPECT_EQ(tie.vertex, 4);
    EXPECT_EQ(tie.triangle, (Triangle{0, 1, 2}));

    EXPECT_THROW(maximum_gain(c, t, {}), ValidationError);
}

TEST(Build, CompleteGraphOnFour) {
    const auto g = build_tmfg(wrap(oracle::random_symmetric(4, 3)));
    EXPECT_EQ(g.edge_count(), 6u);
    EXPECT_TRUE(g.separators.empty());
    EXPECT_EQ(degree_centrality(g), (std::vector<int>{3, 3, 3, 3}));
    expect_valid(g);
}

TEST(Build, FiveVertexTrace) {
    const auto g = build_tmfg(five_vertex());
    EXPECT_EQ(g.edge_count(), 9u);
    ASSERT_EQ(g.insertion_log.size(), 1u);
    EXPECT_EQ(g.insertion_log[0].vertex, 4);
    EXPECT_EQ(g.insertion_log[0].host, (Triangle{0, 1, 2}));
    EXPECT_TRUE(g.adjacent(4, 0) && g.adjacent(4, 1) && g.adjacent(4, 2));
    EXPECT_FALSE(g.adjacent(4, 3));
    EXPECT_EQ(degree_centrality(g), (std::vector<int>{4, 4, 4, 3, 3}));
    EXPECT_EQ(g.cliques.back(), (Tetrahedron{0, 1, 2, 4}));
    EXPECT_EQ(g.separators.back(), (Triangle{0, 1, 2}));
}

TEST(Build, TenVerticesHaveTwentyFourEdges) {
    EXPECT_EQ(build_tmfg(wrap(oracle::random_symmetric(10, 10))).edge_count(), 24u);
}

TEST(Build, RejectsBadInput) {
    auto m = oracle::random_symmetric(6, 2);
    m(1, 2) += 0.01;
    EXPECT_THROW(build_tmfg(wrap(m)), ValidationError);
    auto nan = oracle::random_symmetric(6, 2);
    nan(1, 2) = nan(2, 1) = std::nan("");
    EXPECT_THROW(build_tmfg(wrap(nan)), ValidationError);
}

TEST(Chordality, HandBuiltGraphs) {
    EXPECT_TRUE(is_chordal(std::vector<std::vector<int>>{{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}));
    EXPECT_FALSE(is_chordal(std::vector<std::vector<int>>{{1, 3}, {0, 2}, {1, 3}, {0, 2}}));
    EXPECT_TRUE(is_chordal(std::vector<std::vector<int>>{{1, 3, 2}, {0, 2}, {1, 3, 0}, {0, 2}}));
    EXPECT_FALSE(is_connected(std::vector<std::vector<int>>{{1}, {0}, {3}, {2}}));
}

TEST(Properties, RandomInstances) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 4 + rng() % 57;
        const bool nonneg = trial % 2 == 0;
        const auto c = wrap(oracle::random_symmetric(n, rng(), nonneg ? 0.0 : -1.0, 1.0));
        const auto g = build_tmfg(c);
        expect_valid(g);
        for (const auto& ins : g.insertion_log)
            EXPECT_EQ(ins.gain, face_gain(c.values, ins.vertex, ins.host));
    }
}

TEST(Properties, MatchesNaiveOracle) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 4 + rng() % 27;
        Matrix m = oracle::random_symmetric(n, rng(), -1.0, 1.0);
        if (trial % 3 == 0) {
            // coarse values force exact ties in the gains
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) m(i, j) = m(j, i) = std::round(m(i, j) * 2.0) / 2.0;
        }
        const auto g = build_tmfg(wrap(m));
        const auto o = oracle::naive_tmfg(m);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                ASSERT_EQ(g.adjacent(static_cast<int>(i), static_cast<int>(j)), o.adj[i][j] != 0)
                    << "trial " << trial << " n " << n;
        EXPECT_EQ(g.cliques.size(), o.cliques);
        EXPECT_EQ(g.separators.size(), o.separators);
    }
}

TEST(Properties, LargeInstancesMatchNaiveOracle) {
    // wide enough for the builder to narrow its candidate table twice
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const std::size_t n = 300 + 60 * seed;
        Matrix m = oracle::random_symmetric(n, seed, 0.0, 1.0);
        if (seed == 2) {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) m(i, j) = m(j, i) = std::round(m(i, j) * 4.0) / 4.0;
        }
        const auto g = build_tmfg(wrap(m));
        const auto o = oracle::naive_tmfg(m);
        std::size_t mismatches = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                mismatches += g.adjacent(static_cast<int>(i), static_cast<int>(j)) != (o.adj[i][j] != 0);
        EXPECT_EQ(mismatches, 0u) << "n " << n;
    }
}

TEST(Properties, RelabelingInvariance) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 5 + rng() % 20;
        const Matrix m = oracle::random_symmetric(n, rng(), 0.0, 1.0);
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        Matrix p(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) p(perm[i], perm[j]) = m(i, j);
        const auto a = build_tmfg(wrap(m)), b = build_tmfg(wrap(p));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                EXPECT_EQ(a.adjacent(static_cast<int>(i), static_cast<int>(j)),
                          b.adjacent(static_cast<int>(perm[i]), static_cast<int>(perm[j])));
    }
}

}  // namespace
