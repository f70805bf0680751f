#include "ccx/lifting.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "ccx/neighborhood.hpp"

namespace ccx {

namespace {

std::vector<RankedCell> graph_cells(const Graph& g) {
    std::vector<RankedCell> cells;
    for (auto [u, v] : g.edges) cells.push_back({CellSet{u, v}, 1});
    return cells;
}

// Appends candidates at the given rank, skipping sets that already exist.
CombinatorialComplex with_new_cells(std::size_t vertex_count, std::vector<RankedCell> cells,
                                    const std::vector<CellSet>& candidates, int rank) {
    std::set<CellSet> present;
    for (const auto& rc : cells) present.insert(rc.cell);
    for (Vertex v = 0; v < vertex_count; ++v) present.insert(CellSet{v});
    for (const auto& c : candidates)
        if (present.insert(c).second) cells.push_back({c, rank});
    return build_cc(vertex_count, cells);
}

std::string seq_str(const std::vector<Vertex>& s) {
    std::string out = "(";
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
    return out + ")";
}

}  // namespace

CombinatorialComplex graph_cc(const Graph& g) { return build_cc(g.vertex_count, graph_cells(g)); }

CombinatorialComplex n_hop_cc(const Graph& g, int n) {
    if (n < 2) throw Error(ErrorCode::BadParams, "n-hop lifting needs n >= 2");
    std::vector<CellSet> balls;
    for (Vertex s = 0; s < g.vertex_count; ++s) {
        const auto dist = bfs_distances(g, s);
        std::vector<Vertex> ball;
        for (Vertex v = 0; v < g.vertex_count; ++v)
            if (dist[v] >= 0 && dist[v] <= n) ball.push_back(v);
        balls.emplace_back(std::move(ball));
    }
    return with_new_cells(g.vertex_count, graph_cells(g), balls, n);
}

CombinatorialComplex path_cc(const Graph& g, const std::vector<std::vector<Vertex>>& paths) {
    std::vector<CellSet> cells;
    for (const auto& p : paths) {
        if (p.size() < 3) throw Error(ErrorCode::TooShort, seq_str(p) + " has fewer than two edges");
        for (std::size_t i = 0; i + 1 < p.size(); ++i)
            if (p[i] >= g.vertex_count || p[i + 1] >= g.vertex_count || p[i] == p[i + 1] ||
                !g.has_edge(p[i], p[i + 1]))
                throw Error(ErrorCode::NotAPath, seq_str(p) + " steps along a non-edge");
        cells.emplace_back(p);
    }
    return with_new_cells(g.vertex_count, graph_cells(g), cells, 2);
}

CombinatorialComplex loop_cc(const Graph& g, const std::vector<std::vector<Vertex>>& loops) {
    std::vector<CellSet> cells;
    for (const auto& c : loops) {
        const CellSet set(c);
        if (c.size() < 3 || set.size() != c.size() || set.back() >= g.vertex_count)
            throw Error(ErrorCode::NotACycle, seq_str(c) + " is not a simple cycle");
        for (std::size_t i = 0; i < c.size(); ++i)
            if (!g.has_edge(c[i], c[(i + 1) % c.size()]))
                throw Error(ErrorCode::NotACycle, seq_str(c) + " misses an edge");
        std::size_t inside = 0;
        for (auto [u, v] : g.edges) inside += set.contains(u) && set.contains(v);
        if (inside != c.size()) throw Error(ErrorCode::ChordPresent, seq_str(c) + " has a chord");
        cells.push_back(set);
    }
    return with_new_cells(g.vertex_count, graph_cells(g), cells, 2);
}

std::vector<std::vector<Vertex>> all_triangles(const Graph& g) {
    const auto adj = g.adjacency_lists();
    std::vector<std::vector<Vertex>> out;
    for (auto [u, v] : g.edges)
        for (Vertex w : adj[v])
            if (w > v && g.has_edge(u, w)) out.push_back({u, v, w});
    return out;
}

CombinatorialComplex coface_cc(const CombinatorialComplex& sc) {
    if (sc.dim() > 2) throw Error(ErrorCode::NotTwoDimensional, "dimension " + std::to_string(sc.dim()));
    for (const auto& t : sc.cells(2))
        if (t.size() != 3) throw Error(ErrorCode::NotTwoDimensional, t.to_string() + " is not a triangle");
    std::vector<CellSet> cands;
    if (sc.dim() == 2) {
        const SparseMatrix co = coadjacency(sc, 2, 1).matrix;
        const auto& tris = sc.cells(2);
        for (int i = 0; i < co.outerSize(); ++i) {
            std::vector<Vertex> u = tris[i].vertices();
            for (SparseMatrix::InnerIterator it(co, i); it; ++it) {
                const auto& v = tris[it.col()].vertices();
                u.insert(u.end(), v.begin(), v.end());
            }
            cands.emplace_back(std::move(u));
        }
    }
    return with_new_cells(sc.vertex_count(), sc.ranked_cells(), cands, 3);
}

CombinatorialComplex augment(const CombinatorialComplex& cc, const std::vector<CellSet>& new_cells) {
    return augment_at_rank(cc, new_cells, cc.dim() + 1);
}

CombinatorialComplex augment_at_rank(const CombinatorialComplex& cc, const std::vector<CellSet>& new_cells,
                                     int rank) {
    auto cells = cc.ranked_cells();
    std::set<CellSet> added;
    for (const auto& c : new_cells) {
        if (c.empty()) throw Error(ErrorCode::EmptyCell, "empty augmentation cell");
        if (cc.contains(c)) throw Error(ErrorCode::DuplicateCell, c.to_string() + " is already a cell");
        for (const auto& rc : cells)
            if (c.proper_subset_of(rc.cell) && !added.count(rc.cell))
                throw Error(ErrorCode::StrictContainmentViolation,
                            c.to_string() + " lies inside existing cell " + rc.cell.to_string());
        if (added.insert(c).second) cells.push_back({c, rank});
    }
    return build_cc(cc.vertex_count(), cells);
}

CombinatorialComplex lattice_cc(int height, int width, int window, int stride) {
    if (height < 1 || width < 1 || window < 1 || window > std::min(height, width) || stride < 1)
        throw Error(ErrorCode::BadWindow, "window " + std::to_string(window) + " stride " + std::to_string(stride) +
                                              " on " + std::to_string(height) + "x" + std::to_string(width));
    auto id = [width](int r, int c) { return static_cast<Vertex>(r * width + c); };
    std::vector<RankedCell> cells;
    for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c) {
            if (c + 1 < width) cells.push_back({CellSet{id(r, c), id(r, c + 1)}, 1});
            if (r + 1 < height) cells.push_back({CellSet{id(r, c), id(r + 1, c)}, 1});
        }
    std::vector<CellSet> blocks;
    for (int r = 0; r + window <= height; r += stride)
        for (int c = 0; c + window <= width; c += stride) {
            std::vector<Vertex> b;
            for (int i = 0; i < window; ++i)
                for (int j = 0; j < window; ++j) b.push_back(id(r + i, c + j));
            blocks.emplace_back(std::move(b));
        }
    const auto n = static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
    return with_new_cells(n, cells, blocks, 2);
}

}  // namespace ccx
