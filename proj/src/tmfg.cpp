#include "tfs/tmfg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tfs/error.hpp"
#include "tfs/simd/kernels.hpp"

namespace tfs {
namespace {

constexpr std::size_t kTetrahedronCandidates = 20;
constexpr double kExcluded = -std::numeric_limits<double>::infinity();

void check_input(const SimilarityMatrix& c) {
    const std::size_t n = c.size();
    if (c.values.cols() != n) throw ValidationError("similarity matrix must be square");
    if (n < 4) throw ValidationError("TMFG needs at least 4 vertices, got " + std::to_string(n));
    constexpr std::size_t tile = 64;
    for (std::size_t ib = 0; ib < n; ib += tile) {
        for (std::size_t jb = ib; jb < n; jb += tile) {
            for (std::size_t i = ib; i < std::min(n, ib + tile); ++i) {
                for (std::size_t j = std::max(jb, i); j < std::min(n, jb + tile); ++j) {
                    const double v = c.values(i, j);
                    if (!std::isfinite(v)) throw ValidationError("similarity matrix has a non-finite entry");
                    if (v != c.values(j, i)) throw ValidationError("similarity matrix is not symmetric");
                }
            }
        }
    }
}

Triangle sorted(int a, int b, int c) {
    Triangle t{a, b, c};
    std::sort(t.begin(), t.end());
    return t;
}

// Strictly better under the (gain desc, vertex asc, face lex asc) order.
bool better(double g, int v, const Triangle& t, double bg, int bv, const Triangle& bt) {
    if (g != bg) return g > bg;
    if (v != bv) return v < bv;
    return t < bt;
}

}  // namespace

std::size_t TmfgGraph::edge_count() const noexcept {
    std::size_t twice = 0;
    for (const auto& nb : neighbours) twice += nb.size();
    return twice / 2;
}

std::vector<std::pair<int, int>> TmfgGraph::edges() const {
    std::vector<std::pair<int, int>> out;
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v)
            if (adjacency[u * n + v]) out.emplace_back(static_cast<int>(u), static_cast<int>(v));
    return out;
}

Tetrahedron select_initial_tetrahedron(const SimilarityMatrix& c) {
    const std::size_t n = c.size();
    if (n < 4) throw ValidationError("TMFG needs at least 4 vertices, got " + std::to_string(n));

    std::vector<double> row_sum(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) row_sum[i] += c.values(i, j);

    std::vector<int> cand(n);
    std::iota(cand.begin(), cand.end(), 0);
    std::stable_sort(cand.begin(), cand.end(), [&](int a, int b) { return row_sum[a] > row_sum[b]; });
    cand.resize(std::min(n, kTetrahedronCandidates));
    std::sort(cand.begin(), cand.end());

    const auto& w = c.values;
    const std::size_t m = cand.size();
    double best = -std::numeric_limits<double>::infinity();
    Tetrahedron best_set{};
    // Ascending index enumeration visits sets in lexicographic order, so a
    // strict comparison keeps the smallest set among ties.
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b)
            for (std::size_t d = b + 1; d < m; ++d)
                for (std::size_t e = d + 1; e < m; ++e) {
                    const int i = cand[a], j = cand[b], k = cand[d], l = cand[e];
                    const double s =
                        w(i, j) + w(i, k) + w(i, l) + w(j, k) + w(j, l) + w(k, l);
                    if (s > best) {
                        best = s;
                        best_set = {i, j, k, l};
                    }
                }
    return best_set;
}

GainChoice maximum_gain(const SimilarityMatrix& c, const std::vector<Triangle>& triangles,
                        const std::vector<int>& remaining) {
    if (remaining.empty()) throw ValidationError("maximum_gain: no remaining vertices");
    if (triangles.empty()) throw ValidationError("maximum_gain: no triangles");
    GainChoice best{-1, {}, -std::numeric_limits<double>::infinity()};
    for (const auto& t : triangles) {
        for (int v : remaining) {
            const double g = face_gain(c.values, v, t);
            if (best.vertex < 0 || better(g, v, t, best.gain, best.vertex, best.triangle))
                best = {v, t, g};
        }
    }
    return best;
}

TmfgGraph build_tmfg(const SimilarityMatrix& c) {
    check_input(c);
    const std::size_t n = c.size();
    const auto& w = c.values;
    const auto& kernels = simd::active();

    TmfgGraph g;
    g.n = n;
    g.adjacency.assign(n * n, 0);
    g.neighbours.resize(n);
    auto connect = [&](int u, int v) {
        auto& cell = g.adjacency[static_cast<std::size_t>(u) * n + static_cast<std::size_t>(v)];
        if (cell) return;
        cell = 1;
        g.adjacency[static_cast<std::size_t>(v) * n + static_cast<std::size_t>(u)] = 1;
        g.neighbours[u].push_back(v);
        g.neighbours[v].push_back(u);
    };

    const Tetrahedron seed = select_initial_tetrahedron(c);
    g.cliques.push_back(seed);
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) connect(seed[a], seed[b]);

    // penalty[v] is 0 while v is unplaced and -inf afterwards, so one kernel
    // call scans every candidate vertex for a face.
    std::vector<double> penalty(n, 0.0);
    for (int v : seed) penalty[v] = kExcluded;
    std::size_t unplaced = n - 4;

    // Rescans read rows of `base` restricted to the candidate columns in
    // `columns` (ascending vertex order, so first-index ties and the sums
    // are unchanged). Once half of the columns are placed, the unplaced ones
    // are copied into a narrower table.
    const double* base = w.data().data();
    std::size_t width = n;
    std::vector<int> columns(n);
    std::iota(columns.begin(), columns.end(), 0);
    std::vector<std::size_t> column_of(n);
    std::iota(column_of.begin(), column_of.end(), std::size_t{0});
    std::vector<double> compact;
    auto shrink = [&] {
        std::vector<int> keep;
        for (std::size_t i = 0; i < width; ++i)
            if (penalty[i] == 0.0) keep.push_back(columns[i]);
        std::vector<double> next(n * keep.size());
        for (std::size_t r = 0; r < n; ++r) {
            double* dst = next.data() + r * keep.size();
            const auto src = w.row(r);
            for (std::size_t i = 0; i < keep.size(); ++i) dst[i] = src[static_cast<std::size_t>(keep[i])];
        }
        compact = std::move(next);
        columns = std::move(keep);
        width = columns.size();
        for (std::size_t i = 0; i < width; ++i) column_of[static_cast<std::size_t>(columns[i])] = i;
        penalty.assign(width, 0.0);
        base = compact.data();
    };

    struct Face {
        Triangle t;
        bool alive;
        int best_vertex;
        double best_gain;
        std::uint32_t version;
    };
    std::vector<Face> faces;
    faces.reserve(2 * n);

    // Max-heap of face candidates under the insertion order; entries whose
    // face died or was rescanned since are skipped when popped.
    struct Candidate {
        double gain;
        int vertex;
        Triangle t;
        std::size_t face;
        std::uint32_t version;
    };
    auto lower = [](const Candidate& a, const Candidate& b) {
        return better(b.gain, b.vertex, b.t, a.gain, a.vertex, a.t);
    };
    std::vector<Candidate> heap;
    heap.reserve(8 * n);
    // For each vertex, the faces whose cached best is that vertex.
    std::vector<std::vector<std::size_t>> watchers(n);

    auto rescan = [&](std::size_t fi) {
        Face& f = faces[fi];
        auto row = [&](int v) { return base + static_cast<std::size_t>(v) * width; };
        const auto hit = kernels.sum3_argmax(row(f.t[0]), row(f.t[1]), row(f.t[2]), penalty.data(), width);
        f.best_vertex = columns[hit.index];
        f.best_gain = hit.value;
        ++f.version;
        watchers[static_cast<std::size_t>(f.best_vertex)].push_back(fi);
        heap.push_back({f.best_gain, f.best_vertex, f.t, fi, f.version});
        std::push_heap(heap.begin(), heap.end(), lower);
    };
    auto add_face = [&](const Triangle& t) {
        faces.push_back({t, true, -1, kExcluded, 0});
        if (unplaced > 0) rescan(faces.size() - 1);
    };

    add_face({seed[0], seed[1], seed[2]});
    add_face({seed[0], seed[1], seed[3]});
    add_face({seed[0], seed[2], seed[3]});
    add_face({seed[1], seed[2], seed[3]});

    while (unplaced > 0) {
        std::size_t chosen = faces.size();
        while (chosen == faces.size()) {
            std::pop_heap(heap.begin(), heap.end(), lower);
            const Candidate top = heap.back();
            heap.pop_back();
            const Face& f = faces[top.face];
            if (f.alive && f.version == top.version) chosen = top.face;
        }
        Face& host = faces[chosen];
        const int vd = host.best_vertex;
        const Triangle t = host.t;
        g.insertion_log.push_back({vd, t, host.best_gain});
        g.separators.push_back(t);
        g.cliques.push_back({t[0], t[1], t[2], vd});
        std::sort(g.cliques.back().begin(), g.cliques.back().end());
        host.alive = false;
        connect(vd, t[0]);
        connect(vd, t[1]);
        connect(vd, t[2]);

        penalty[column_of[static_cast<std::size_t>(vd)]] = kExcluded;
        --unplaced;
        if (unplaced > 0 && width >= 256 && 2 * unplaced <= width) shrink();

        add_face(sorted(t[0], t[1], vd));
        add_face(sorted(t[0], t[2], vd));
        add_face(sorted(t[1], t[2], vd));

        if (unplaced > 0) {
            auto stale = std::move(watchers[vd]);
            watchers[vd].clear();
            for (auto fi : stale)
                if (faces[fi].alive && faces[fi].best_vertex == vd) rescan(fi);
        }
    }

    for (const auto& f : faces)
        if (f.alive) g.triangles.push_back(f.t);
    for (auto& nb : g.neighbours) std::sort(nb.begin(), nb.end());
    return g;
}

bool is_chordal(const std::vector<std::vector<int>>& nb) {
    const std::size_t n = nb.size();
    if (n == 0) return true;

    // Maximum cardinality search: repeatedly number the unnumbered vertex
    // with the most numbered neighbours (smallest index on ties).
    std::vector<int> weight(n, 0), order;
    std::vector<bool> numbered(n, false);
    order.reserve(n);
    for (std::size_t step = 0; step < n; ++step) {
        int pick = -1;
        for (std::size_t v = 0; v < n; ++v)
            if (!numbered[v] && (pick < 0 || weight[v] > weight[pick])) pick = static_cast<int>(v);
        numbered[pick] = true;
        order.push_back(pick);
        for (int u : nb[pick])
            if (!numbered[u]) ++weight[u];
    }

    // The reverse of the visit order is a perfect elimination ordering iff
    // the graph is chordal. For each vertex, its neighbours visited earlier
    // must form a clique; it suffices that the latest-visited of them is
    // adjacent to all the others.
    std::vector<int> pos(n);
    for (std::size_t i = 0; i < n; ++i) pos[order[i]] = static_cast<int>(i);
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (std::size_t v = 0; v < n; ++v)
        for (int u : nb[v]) adj[v][u] = 1;

    for (std::size_t i = 0; i < n; ++i) {
        const int v = order[i];
        int parent = -1;
        for (int u : nb[v])
            if (pos[u] < pos[v] && (parent < 0 || pos[u] > pos[parent])) parent = u;
        if (parent < 0) continue;
        for (int u : nb[v])
            if (u != parent && pos[u] < pos[v] && !adj[parent][u]) return false;
    }
    return true;
}

bool is_chordal(const TmfgGraph& g) { return is_chordal(g.neighbours); }

bool is_connected(const std::vector<std::vector<int>>& nb) {
    if (nb.empty()) return true;
    std::vector<bool> seen(nb.size(), false);
    std::vector<int> stack{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int u : nb[v])
            if (!seen[u]) {
                seen[u] = true;
                ++count;
                stack.push_back(u);
            }
    }
    return count == nb.size();
}

bool is_connected(const TmfgGraph& g) { return is_connected(g.neighbours); }

std::vector<int> degree_centrality(const TmfgGraph& g) {
    std::vector<int> deg(g.n, 0);
    for (std::size_t v = 0; v < g.n; ++v) {
        int row = 0;
        for (std::size_t u = 0; u < g.n; ++u) row += g.adjacency[v * g.n + u];
        deg[v] = row;
    }
    return deg;
}

}  // namespace tfs
