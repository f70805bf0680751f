#pragma once

#include <utility>
#include <vector>

#include "ccx/complex.hpp"

namespace ccx {

/// Simple undirected graph with edges stored as sorted (u < v) pairs.
struct Graph {
    std::size_t vertex_count = 0;
    std::vector<std::pair<Vertex, Vertex>> edges;

    std::vector<std::vector<Vertex>> adjacency_lists() const;
    bool has_edge(Vertex u, Vertex v) const;
};

/// Normalizes and validates an edge list: orders each pair, drops duplicates.
/// @throws Error with SelfLoop or VertexOutOfRange.
Graph make_graph(std::size_t vertex_count, std::vector<std::pair<Vertex, Vertex>> edges);

/// Hop distances from source; unreachable vertices get -1.
std::vector<int> bfs_distances(const Graph& g, Vertex source);
/// Component label per vertex, labels numbered by smallest member.
std::vector<std::size_t> connected_components(const Graph& g);
/// Subgraph on the given vertices, relabelled in the order given.
Graph induced_subgraph(const Graph& g, const std::vector<Vertex>& vertices);

}  // namespace ccx
