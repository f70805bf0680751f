#include "ccx/mog.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ccx/lifting.hpp"

namespace ccx {

std::vector<double> agd(const Graph& g) {
    const auto comp = connected_components(g);
    std::vector<std::size_t> size(g.vertex_count, 0);
    for (auto c : comp) ++size[c];
    std::vector<double> out(g.vertex_count, 0.0);
    for (Vertex v = 0; v < g.vertex_count; ++v) {
        const auto dist = bfs_distances(g, v);
        long total = 0;
        for (int d : dist)
            if (d > 0) total += d;
        out[v] = static_cast<double>(total) / static_cast<double>(size[comp[v]]);
    }
    return out;
}

std::vector<double> normalize_scalar(const std::vector<double>& f) {
    if (f.empty()) return f;
    const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
    const double a = *lo, b = *hi;
    std::vector<double> out(f.size(), 0.5);
    if (b > a)
        for (std::size_t i = 0; i < f.size(); ++i) out[i] = (f[i] - a) / (b - a);
    return out;
}

MogCover make_cover(int n, double overlap) {
    if (n < 1 || !(overlap > 0.0 && overlap < 1.0))
        throw Error(ErrorCode::BadParams, "cover needs n >= 1 and overlap in (0, 1)");
    MogCover c;
    if (n == 1) {
        c.intervals.emplace_back(0.0, 1.0);
        return c;
    }
    const double len = (1.0 + overlap) / n;
    const double step = (1.0 - len) / (n - 1);
    for (int i = 0; i < n; ++i) {
        const double lo = i == 0 ? 0.0 : i * step;
        const double hi = i == n - 1 ? 1.0 : std::min(1.0, i * step + len);
        c.intervals.emplace_back(lo, hi);
    }
    return c;
}

MogResult mog(const Graph& g, const std::vector<double>& f, const MogCover& cover) {
    if (f.size() != g.vertex_count) throw Error(ErrorCode::ShapeMismatch, "one scalar per vertex is required");
    std::vector<MogComponent> found;
    for (std::size_t t = 0; t < cover.intervals.size(); ++t) {
        const auto [lo, hi] = cover.intervals[t];
        std::vector<Vertex> members;
        for (Vertex v = 0; v < g.vertex_count; ++v)
            if (lo <= f[v] && f[v] <= hi) members.push_back(v);
        const Graph sub = induced_subgraph(g, members);
        const auto label = connected_components(sub);
        std::map<std::size_t, std::vector<Vertex>> groups;
        for (std::size_t i = 0; i < members.size(); ++i) groups[label[i]].push_back(members[i]);
        // Labels follow the smallest member, so this is already (interval, min vertex) order.
        for (auto& [l, vs] : groups) found.push_back({t, CellSet(std::move(vs)), 0});
    }

    MogResult r;
    std::map<CellSet, bool> seen;
    for (auto& c : found) {
        if (!seen.emplace(c.vertices, true).second) continue;
        (c.vertices.size() <= 2 ? r.skipped : r.components).push_back(c);
    }
    std::vector<CellSet> cells;
    for (const auto& c : r.components) cells.push_back(c.vertices);
    r.augmented_cc = augment_at_rank(graph_cc(g), cells, 2);
    for (auto& c : r.components) c.cell_index = r.augmented_cc.find(c.vertices)->index;
    for (std::size_t i = 0; i < r.components.size(); ++i)
        for (std::size_t j = i + 1; j < r.components.size(); ++j)
            if (r.components[i].vertices.intersects(r.components[j].vertices)) r.mog_edges.emplace_back(i, j);
    return r;
}

Cochain mog_pool(const Graph& g, const Cochain& h0, const std::vector<double>& f, const MogCover& cover,
                 Aggregation agg) {
    const MogResult r = mog(g, f, cover);
    if (r.augmented_cc.dim() < 2) return Cochain{2, Matrix::Zero(0, h0.dim())};
    return push_forward(CochainMap::from(incidence(r.augmented_cc, 0, 2)).transposed(), h0, agg);
}

}  // namespace ccx
