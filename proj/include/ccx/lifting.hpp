#pragma once

#include <vector>

#include "ccx/complex.hpp"
#include "ccx/graph.hpp"

namespace ccx {

// Every lifting keeps the cell set duplicate-free: a candidate whose vertex
// set already exists in the complex, at any rank, is skipped.

/// Vertices as 0-cells and edges as 1-cells.
CombinatorialComplex graph_cc(const Graph& g);

/// Adds the radius-n ball around every vertex as a rank-n cell (n >= 2).
CombinatorialComplex n_hop_cc(const Graph& g, int n);

/// Adds the vertex set of every walk as a 2-cell. Walks need at least two edges.
/// @throws Error with TooShort or NotAPath.
CombinatorialComplex path_cc(const Graph& g, const std::vector<std::vector<Vertex>>& paths);

/// Adds each chordless cycle as a 2-cell.
/// @throws Error with NotACycle or ChordPresent.
CombinatorialComplex loop_cc(const Graph& g, const std::vector<std::vector<Vertex>>& loops);

/// Every triangle u < v < w of g, usable as loops for loop_cc.
std::vector<std::vector<Vertex>> all_triangles(const Graph& g);

/// For each triangle, adds the union of it and its edge-sharing triangles as a 3-cell.
/// @throws Error with NotTwoDimensional.
CombinatorialComplex coface_cc(const CombinatorialComplex& sc);

/// Adds cells at rank dim+1.
/// @throws Error with DuplicateCell when a new cell is already present, or
///         StrictContainmentViolation when a new cell lies inside an existing one.
CombinatorialComplex augment(const CombinatorialComplex& cc, const std::vector<CellSet>& new_cells);
/// Same as augment with an explicit rank for the new cells.
CombinatorialComplex augment_at_rank(const CombinatorialComplex& cc, const std::vector<CellSet>& new_cells,
                                     int rank);

/// Pixel grid: pixels r*width + c, 4-neighbour edges, window x window blocks.
/// @throws Error with BadWindow.
CombinatorialComplex lattice_cc(int height, int width, int window = 2, int stride = 1);

}  // namespace ccx
