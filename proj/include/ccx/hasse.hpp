#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ccx/diagram.hpp"
#include "ccx/graph.hpp"

namespace ccx {

/// Directed weighted link from a sending cell to a receiving cell.
struct HasseArc {
    std::size_t from = 0;
    std::size_t to = 0;
    double weight = 1.0;
};

/// Undirected augmented edge, tagged by every selector that induces it.
struct AugmentedEdge {
    std::size_t a = 0;
    std::size_t b = 0;
    std::vector<std::string> tags;
};

/**
 * Cells as vertices keyed by (rank, canonical index), with core edges
 * x -> y for x inside y one rank up. Augmentation adds undirected edges and
 * keeps each selector's nonzeros as its own weighted channel.
 */
struct HasseGraph {
    std::vector<CellRef> vertices;
    std::map<CellRef, std::size_t> index;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::vector<AugmentedEdge> augmented;
    std::map<std::string, std::vector<HasseArc>> channels;

    std::size_t vertex(int rank, std::size_t i) const { return index.at(CellRef{rank, i}); }
    bool is_acyclic() const;
    /// Graphviz text; core edges solid, augmented edges dashed and labelled.
    std::string to_dot(const CombinatorialComplex& cc) const;
};

HasseGraph hasse(const CombinatorialComplex& cc);

/// @throws Error(UnknownSelector)
HasseGraph augment_hasse(const CombinatorialComplex& cc, const std::vector<std::string>& selectors);

/**
 * Runs a compiled diagram by message passing over the augmented Hasse graph
 * of cc: every operator nonzero is an arc of that edge's channel, and each
 * cell updates from the arcs entering it.
 */
CochainMapById reduce_and_run(const TensorDiagram& d, const CombinatorialComplex& cc, const CochainMapById& inputs);

/// Vertex count, rank sizes and the incidence patterns B_{k,k+1} and B_{0,k}
/// in canonical order. Equal strings mean equal complexes.
std::string structure_fingerprint(const CombinatorialComplex& cc);

/// Complex with vertex v renamed sigma[v], plus the cell transform per rank
/// carrying cochains of cc to the relabelled complex. Only these
/// vertex-induced permutations of Hasse labels preserve the structure.
struct Relabelled {
    CombinatorialComplex cc;
    std::map<int, CellTransform> transform;
};

/// @throws Error(BadParams) unless sigma is a permutation of the vertices.
Relabelled relabel_vertices(const CombinatorialComplex& cc, const std::vector<Vertex>& sigma);

struct WeightedGraph {
    Graph graph;
    std::vector<double> weights;  ///< aligned with graph.edges
};

/// Graph on the k-cells with an edge wherever sim(i, j) != 0 (i < j).
WeightedGraph representation_graph(const CombinatorialComplex& cc, int k,
                                   const std::function<double(std::size_t, std::size_t)>& sim);
/// Same with a |X^k| x |X^k| matrix as similarity.
WeightedGraph representation_graph(const CombinatorialComplex& cc, int k, const SparseMatrix& sim);

}  // namespace ccx
