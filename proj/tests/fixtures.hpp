#pragma once

#include <functional>
#include <limits>
#include <queue>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ccx/complex.hpp"
#include "ccx/graph.hpp"
#include "ccx/io.hpp"
#include "ccx/lifting.hpp"
#include "ccx/mog.hpp"
#include "ccx/neighborhood.hpp"

namespace fixtures {

using namespace ccx;

inline CombinatorialComplex small_cc() { return build_cc(3, {{{0, 1}, 1}, {{0, 1, 2}, 2}}); }

inline Graph path_graph(std::size_t n) {
    std::vector<std::pair<Vertex, Vertex>> e;
    for (Vertex v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
    return make_graph(n, e);
}

inline Graph cycle_graph(std::size_t n) {
    std::vector<std::pair<Vertex, Vertex>> e;
    for (Vertex v = 0; v < n; ++v) e.emplace_back(v, static_cast<Vertex>((v + 1) % n));
    return make_graph(n, e);
}

inline Graph random_graph(std::mt19937_64& rng, std::size_t n, double p) {
    std::bernoulli_distribution coin(p);
    std::vector<std::pair<Vertex, Vertex>> e;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v)
            if (coin(rng)) e.emplace_back(u, v);
    return make_graph(n, e);
}

inline Mesh tetra_mesh() {
    Mesh m;
    m.positions = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    m.faces = {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}};
    return m;
}

inline Mesh octa_mesh() {
    Mesh m;
    m.positions = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    m.faces = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4}, {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
    return m;
}

/// Named complexes covering every lifting route.
inline std::vector<std::pair<std::string, CombinatorialComplex>> all_ccs() {
    std::vector<std::pair<std::string, CombinatorialComplex>> out;
    out.emplace_back("small", small_cc());
    const Graph tri = cycle_graph(3);
    out.emplace_back("triangle-loop", loop_cc(tri, all_triangles(tri)));
    out.emplace_back("c6-loop", loop_cc(cycle_graph(6), {{0, 1, 2, 3, 4, 5}}));
    out.emplace_back("path5-paths", path_cc(path_graph(5), {{0, 1, 2}, {2, 3, 4}, {1, 2, 3}}));
    out.emplace_back("path6-nhop2", n_hop_cc(path_graph(6), 2));
    const Graph wheel = make_graph(6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 1}});
    out.emplace_back("wheel-coface", coface_cc(loop_cc(wheel, all_triangles(wheel))));
    out.emplace_back("lattice3x3", lattice_cc(3, 3));
    out.emplace_back("lattice4x4-s2", lattice_cc(4, 4, 2, 2));
    out.emplace_back("tetra-mesh", mesh_to_cc(tetra_mesh()));
    out.emplace_back("octa-mesh", mesh_to_cc(octa_mesh()));
    const Graph p6 = path_graph(6);
    out.emplace_back("path6-mog", mog(p6, {0, 0.2, 0.4, 0.6, 0.8, 1.0}, MogCover{{{0, 0.65}, {0.35, 1}}}).augmented_cc);
    std::mt19937_64 rng(11);
    const Graph rg = random_graph(rng, 14, 0.3);
    out.emplace_back("random-mog", mog(rg, normalize_scalar(agd(rg)), make_cover(3, 0.3)).augmented_cc);
    return out;
}

/// Dense B_{r,k} by direct subset tests.
inline Matrix brute_incidence(const CombinatorialComplex& cc, int r, int k) {
    const auto& rows = cc.cells(r);
    const auto& cols = cc.cells(k);
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            if (rows[i].proper_subset_of(cols[j])) m(i, j) = 1;
    return m;
}

/// Dense A_{r,k}: a bridge of rank r+k strictly contains both cells.
inline Matrix brute_adjacency(const CombinatorialComplex& cc, int r, int k) {
    const auto& xs = cc.cells(r);
    const auto n = static_cast<Eigen::Index>(xs.size());
    Matrix m = Matrix::Zero(n, n);
    if (r + k > cc.dim()) return m;
    for (const auto& z : cc.cells(r + k))
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                if (i != j && xs[i].proper_subset_of(z) && xs[j].proper_subset_of(z)) m(i, j) = 1;
    return m;
}

/// Dense coA_{r,k}: a cell of rank r-k strictly inside both cells.
inline Matrix brute_coadjacency(const CombinatorialComplex& cc, int r, int k) {
    const auto& xs = cc.cells(r);
    const auto n = static_cast<Eigen::Index>(xs.size());
    Matrix m = Matrix::Zero(n, n);
    if (r - k < 0) return m;
    for (const auto& z : cc.cells(r - k))
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                if (i != j && z.proper_subset_of(xs[i]) && z.proper_subset_of(xs[j])) m(i, j) = 1;
    return m;
}

/// Off-diagonal nonzero pattern of a dense matrix as 0/1.
inline Matrix off_pattern(const Matrix& m) {
    Matrix p = Matrix::Zero(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (i != j && m(i, j) != 0) p(i, j) = 1;
    return p;
}

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = u(rng);
    return m;
}

/// Hop distances by Bellman-Ford relaxation with unit weights.
inline std::vector<double> relaxed_distances(const Graph& g, Vertex s) {
    std::vector<double> d(g.vertex_count, std::numeric_limits<double>::infinity());
    d[s] = 0;
    for (std::size_t round = 0; round < g.vertex_count; ++round)
        for (auto [u, v] : g.edges) {
            d[v] = std::min(d[v], d[u] + 1);
            d[u] = std::min(d[u], d[v] + 1);
        }
    return d;
}

/// Shortest path lengths from s by Dijkstra with unit edge weights.
inline std::vector<double> dijkstra_distances(const Graph& g, Vertex s) {
    const auto adj = g.adjacency_lists();
    std::vector<double> d(g.vertex_count, std::numeric_limits<double>::infinity());
    using Item = std::pair<double, Vertex>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> q;
    d[s] = 0;
    q.emplace(0.0, s);
    while (!q.empty()) {
        const auto [du, u] = q.top();
        q.pop();
        if (du > d[u]) continue;
        for (Vertex v : adj[u])
            if (du + 1 < d[v]) {
                d[v] = du + 1;
                q.emplace(d[v], v);
            }
    }
    return d;
}

}  // namespace fixtures
