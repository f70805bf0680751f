#pragma once

#include <functional>
#include <map>
#include <vector>

#include "ccx/cochain.hpp"

namespace ccx {

/// One neighborhood of a message-passing step. Row x of the matrix lists
/// the source cells y sending to target cell x.
struct HompNeighborhood {
    int target_rank = 0;
    int source_rank = 0;
    SparseMatrix matrix;  ///< |X^target| x |X^source|
    PairMap alpha;        ///< m_{x,y} = alpha(h_x, h_y)
    Eigen::Index message_dim = 0;
};

/// h' = beta(h_x, m_x)
using UpdateMap = std::function<RowVector(const RowVector& h, const RowVector& m)>;

struct HompConfig {
    std::vector<HompNeighborhood> neighborhoods;
    Aggregation intra = Aggregation::Sum;
    Combine inter = Combine::Sum;  ///< folded left to right in list order
    UpdateMap beta;
};

/// Cochain matrix per rank.
using RankCochains = std::map<int, Matrix>;

/**
 * One round of higher-order message passing. Ranks targeted by no
 * neighborhood are returned unchanged.
 * @throws Error(ShapeMismatch) when a rank lacks its cochain or shapes disagree.
 */
RankCochains homp_step(const CombinatorialComplex& cc, const RankCochains& h, const HompConfig& cfg);

/**
 * The same round assembled from merge nodes: a pairwise merge per
 * neighborhood, identity merges folding the neighborhood messages, and a
 * final identity merge of messages with the old features.
 */
RankCochains homp_via_merge_nodes(const CombinatorialComplex& cc, const RankCochains& h, const HompConfig& cfg);

/// Attention score s(h_x, h_y); weights are its softmax over the neighborhood.
using ScoreMap = std::function<double(const RowVector& receiver, const RowVector& sender)>;

struct AttentionHompConfig {
    HompConfig base;
    std::vector<ScoreMap> scores;  ///< one per neighborhood; empty entries mean uniform weights
    std::vector<double> b;         ///< one per neighborhood, projected to the simplex per target rank
};

RankCochains attention_homp_step(const CombinatorialComplex& cc, const RankCochains& h,
                                 const AttentionHompConfig& cfg);

/// Euclidean projection onto {b >= 0, sum b = 1}.
std::vector<double> project_to_simplex(const std::vector<double>& v);

}  // namespace ccx
