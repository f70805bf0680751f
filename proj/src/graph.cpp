#include "ccx/graph.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace ccx {

std::vector<std::vector<Vertex>> Graph::adjacency_lists() const {
    std::vector<std::vector<Vertex>> adj(vertex_count);
    for (auto [u, v] : edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    return adj;
}

bool Graph::has_edge(Vertex u, Vertex v) const {
    if (u > v) std::swap(u, v);
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(u, v));
}

Graph make_graph(std::size_t vertex_count, std::vector<std::pair<Vertex, Vertex>> edges) {
    for (auto& [u, v] : edges) {
        if (u == v) throw Error(ErrorCode::SelfLoop, "self-loop at " + std::to_string(u));
        if (u >= vertex_count || v >= vertex_count)
            throw Error(ErrorCode::VertexOutOfRange,
                        "edge (" + std::to_string(u) + "," + std::to_string(v) + ") with " +
                            std::to_string(vertex_count) + " vertices");
        if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return Graph{vertex_count, std::move(edges)};
}

std::vector<int> bfs_distances(const Graph& g, Vertex source) {
    const auto adj = g.adjacency_lists();
    std::vector<int> dist(g.vertex_count, -1);
    std::deque<Vertex> queue{source};
    dist[source] = 0;
    while (!queue.empty()) {
        Vertex u = queue.front();
        queue.pop_front();
        for (Vertex v : adj[u])
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
    }
    return dist;
}

std::vector<std::size_t> connected_components(const Graph& g) {
    const auto adj = g.adjacency_lists();
    constexpr auto unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> label(g.vertex_count, unset);
    std::size_t next = 0;
    for (Vertex s = 0; s < g.vertex_count; ++s) {
        if (label[s] != unset) continue;
        std::vector<Vertex> stack{s};
        label[s] = next;
        while (!stack.empty()) {
            Vertex u = stack.back();
            stack.pop_back();
            for (Vertex v : adj[u])
                if (label[v] == unset) {
                    label[v] = next;
                    stack.push_back(v);
                }
        }
        ++next;
    }
    return label;
}

Graph induced_subgraph(const Graph& g, const std::vector<Vertex>& vertices) {
    std::unordered_map<Vertex, Vertex> local;
    for (std::size_t i = 0; i < vertices.size(); ++i) local[vertices[i]] = static_cast<Vertex>(i);
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (auto [u, v] : g.edges) {
        auto a = local.find(u), b = local.find(v);
        if (a != local.end() && b != local.end()) edges.emplace_back(a->second, b->second);
    }
    return make_graph(vertices.size(), std::move(edges));
}

}  // namespace ccx
