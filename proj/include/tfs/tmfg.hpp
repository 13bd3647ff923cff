#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "tfs/similarity.hpp"

namespace tfs {

using Triangle = std::array<int, 3>;     // sorted ascending
using Tetrahedron = std::array<int, 4>;  // sorted ascending

struct Insertion {
    int vertex;
    Triangle host;
    double gain;
};

// Triangulated Maximally Filtered Graph. Immutable once built.
struct TmfgGraph {
    std::size_t n = 0;
    std::vector<std::uint8_t> adjacency;  // n * n, row-major, symmetric
    std::vector<std::vector<int>> neighbours;
    std::vector<Tetrahedron> cliques;
    std::vector<Triangle> separators;
    std::vector<Triangle> triangles;  // faces left at termination
    std::vector<Insertion> insertion_log;

    bool adjacent(int u, int v) const noexcept {
        return adjacency[static_cast<std::size_t>(u) * n + static_cast<std::size_t>(v)] != 0;
    }
    std::size_t edge_count() const noexcept;
    std::vector<std::pair<int, int>> edges() const;
};

struct GainChoice {
    int vertex;
    Triangle triangle;
    double gain;
};

// Seed clique: the 4-subset with the largest internal weight sum, searched
// exhaustively among the min(n, 20) vertices with the largest off-diagonal
// row sums. Ties go to the lexicographically smaller set.
Tetrahedron select_initial_tetrahedron(const SimilarityMatrix& c);

// Best (vertex, face) pair by gain C[v][a] + C[v][b] + C[v][c]; ties go to
// the smaller vertex, then the lexicographically smaller face.
GainChoice maximum_gain(const SimilarityMatrix& c, const std::vector<Triangle>& triangles,
                        const std::vector<int>& remaining);

TmfgGraph build_tmfg(const SimilarityMatrix& c);

// Maximum cardinality search followed by a perfect elimination ordering
// check.
bool is_chordal(const std::vector<std::vector<int>>& neighbours);
bool is_chordal(const TmfgGraph& g);

bool is_connected(const std::vector<std::vector<int>>& neighbours);
bool is_connected(const TmfgGraph& g);

std::vector<int> degree_centrality(const TmfgGraph& g);

// Exact gain used by the builder, summed in ascending face order.
inline double face_gain(const Matrix& c, int v, const Triangle& t) {
    return (c(v, t[0]) + c(v, t[1])) + c(v, t[2]);
}

}  // namespace tfs
