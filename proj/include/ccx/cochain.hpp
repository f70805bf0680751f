#pragma once

#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "ccx/graph.hpp"
#include "ccx/neighborhood.hpp"

namespace ccx {

/// Features on the k-cells of a complex, one row per cell in canonical order.
struct Cochain {
    int rank = 0;
    Matrix data;

    Eigen::Index rows() const { return data.rows(); }
    Eigen::Index dim() const { return data.cols(); }
};

/// G : C^domain -> C^codomain, stored as a |X^codomain| x |X^domain| matrix.
struct CochainMap {
    SparseMatrix matrix;
    int domain_rank = 0;
    int codomain_rank = 0;

    /// Reads a neighborhood matrix as a map from its column rank to its row rank.
    static CochainMap from(const NeighborhoodMatrix& n);
    CochainMap transposed() const;
    /// Zero map with the same shape.
    CochainMap zero() const;
};

enum class Aggregation { Sum, Mean, Max };
enum class Combine { Sum, Concat };
enum class MapClass { Pooling, Unpooling, RankPreserving };

using RowVector = Eigen::RowVectorXd;
/// Per-row map applied to features before aggregation or after merging.
using RowMap = std::function<RowVector(const RowVector&)>;

namespace rowmap {
RowMap identity();
RowMap tanh();
RowMap relu();
/// h -> h W + b
RowMap affine(Matrix w, RowVector b);
}  // namespace rowmap

/// G H. @throws Error(ShapeMismatch)
Cochain apply_map(const CochainMap& g, const Cochain& h);

/**
 * For every codomain cell y, aggregates alpha(h_x) over the domain cells x
 * with a nonzero in row y of G. Rows without neighbors are zero.
 */
Cochain push_forward(const CochainMap& g, const Cochain& h, Aggregation agg,
                     const RowMap& alpha = rowmap::identity());

/// beta(F_{G1}(H1) combined with F_{G2}(H2)), with sum push-forwards and identity alpha.
Cochain merge_node(const CochainMap& g1, const CochainMap& g2, const Cochain& h1, const Cochain& h2,
                   Combine combine, const RowMap& beta = rowmap::identity());

std::pair<Cochain, Cochain> split_node(const CochainMap& g1, const CochainMap& g2, const Cochain& h,
                                       const RowMap& beta1 = rowmap::identity(),
                                       const RowMap& beta2 = rowmap::identity());

/// Message function that sees the receiving cell's features and the sender's.
using PairMap = std::function<RowVector(const RowVector& receiver, const RowVector& sender)>;

/**
 * Merge of Id on the receiving rank with G on the sending rank where the
 * message depends on both endpoints: row y aggregates alpha(x_y, h_s) over
 * the nonzero columns s of row y of G. Rows without neighbors are zero of
 * width out_dim.
 */
Cochain pairwise_merge(const CochainMap& g, const Cochain& receivers, const Cochain& senders,
                       const PairMap& alpha, Aggregation agg, Eigen::Index out_dim);

MapClass classify_map(const CochainMap& g);
const char* map_class_name(MapClass c);

struct GraphPool {
    CombinatorialComplex cc;
    Cochain pooled;
};

/**
 * Adds every cluster that is not already a cell as a 2-cell and pushes H0
 * forward along B_{0,2}^T.
 * @throws Error with NotAPartition or EmptyAugmentation.
 */
GraphPool graph_pool_via_clusters(const Graph& g, const std::vector<std::vector<Vertex>>& clusters,
                                  const Cochain& h0, Aggregation agg);

/// Header "rank d rows", then one row of d reals per line.
void write_cochain(std::ostream& os, const Cochain& c);
Cochain read_cochain(std::istream& is);

}  // namespace ccx
