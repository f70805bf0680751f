#pragma once

#include <utility>
#include <vector>

#include "ccx/cochain.hpp"

namespace ccx {

/// Average geodesic distance of every vertex within its connected component.
std::vector<double> agd(const Graph& g);

/// Min-max scaling to [0, 1]; a constant input maps to 0.5 everywhere.
std::vector<double> normalize_scalar(const std::vector<double>& f);

struct MogCover {
    std::vector<std::pair<double, double>> intervals;
};

/// n evenly spaced intervals of length (1 + overlap) / n spanning [0, 1].
/// @throws Error(BadParams) unless n >= 1 and 0 < overlap < 1.
MogCover make_cover(int n_intervals, double overlap);

struct MogComponent {
    std::size_t interval = 0;
    CellSet vertices;
    std::size_t cell_index = 0;  ///< index among the 2-cells of the augmented complex
};

struct MogResult {
    /// MOG nodes ordered by (interval, smallest vertex); each became a 2-cell.
    std::vector<MogComponent> components;
    /// Pairs i < j of components sharing a vertex.
    std::vector<std::pair<std::size_t, std::size_t>> mog_edges;
    /// Components of one or two vertices; they coincide with existing cells
    /// and are not MOG nodes.
    std::vector<MogComponent> skipped;
    CombinatorialComplex augmented_cc;
};

/**
 * Mapper on a graph: pulls back each interval (closed membership), splits
 * the induced subgraphs into connected components, merges components with
 * identical vertex sets and links components that intersect.
 */
MogResult mog(const Graph& g, const std::vector<double>& f, const MogCover& cover);

/// Pushes H0 forward along B_{0,2}^T of the MOG-augmented complex.
Cochain mog_pool(const Graph& g, const Cochain& h0, const std::vector<double>& f, const MogCover& cover,
                 Aggregation agg);

}  // namespace ccx
