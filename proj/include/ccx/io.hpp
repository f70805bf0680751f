#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "ccx/cochain.hpp"
#include "ccx/graph.hpp"

namespace ccx {

/// Reads "u v" pairs, one per line, with '#' comments. A "# vertices N"
/// line raises the vertex count above max index + 1.
/// @throws Error with ParseError or SelfLoop.
Graph parse_edge_list(std::istream& is);
Graph load_edge_list(const std::string& path);
void write_edge_list(std::ostream& os, const Graph& g);

/// "cc N" header followed by one "rank v1 v2 ..." line per cell.
CombinatorialComplex parse_cc(std::istream& is);
CombinatorialComplex load_cc(const std::string& path);
void write_cc(std::ostream& os, const CombinatorialComplex& cc);

struct Mesh {
    std::vector<std::array<double, 3>> positions;
    std::vector<std::array<Vertex, 3>> faces;
};

/// @throws Error with ParseError, NonTriangleFace, VertexOutOfRange or DegenerateFace.
Mesh parse_off(std::istream& is);
Mesh load_off(const std::string& path);
void write_off(std::ostream& os, const Mesh& m);

/// Vertices at rank 0, face edges at rank 1, faces at rank 2.
CombinatorialComplex mesh_to_cc(const Mesh& m);

struct MeshFeatures {
    Cochain vertex;  ///< position, unit area-weighted normal
    Cochain edge;    ///< length, dihedral, two opposite angles, two length ratios
    Cochain face;    ///< area, unit normal, angles at the vertices in sorted order
};

/// Rows follow the canonical cell order of mesh_to_cc(m). Boundary edges get
/// dihedral pi and zeros for the missing face.
/// @throws Error(NonManifoldEdge)
MeshFeatures mesh_features(const Mesh& m);

/// Union of the directed k-nearest-neighbor relations (Euclidean, ties to
/// the lower index). Points are rows.
/// @throws Error(BadK) unless 1 <= k < n.
Graph knn_graph(const Matrix& points, int k);

/// Directory holding test and example data; CCX_FIXTURE_DIR overrides the
/// built-in default.
std::string fixture_dir();
std::string fixture_path(const std::string& name);

std::string read_file(const std::string& path);

}  // namespace ccx
