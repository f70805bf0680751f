#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ccx/error.hpp"

namespace ccx {

using Vertex = std::uint32_t;

/**
 * A non-empty set of vertices stored as a strictly increasing tuple.
 * Construction sorts and deduplicates the input.
 */
class CellSet {
public:
    CellSet() = default;
    CellSet(std::vector<Vertex> vertices);
    CellSet(std::initializer_list<Vertex> vertices);

    const std::vector<Vertex>& vertices() const noexcept { return v_; }
    std::size_t size() const noexcept { return v_.size(); }
    bool empty() const noexcept { return v_.empty(); }
    Vertex front() const { return v_.front(); }
    Vertex back() const { return v_.back(); }
    bool contains(Vertex v) const;

    /// True when every vertex of this set is in other.
    bool subset_of(const CellSet& other) const;
    bool proper_subset_of(const CellSet& other) const {
        return v_.size() < other.v_.size() && subset_of(other);
    }
    bool intersects(const CellSet& other) const;

    auto operator<=>(const CellSet&) const = default;
    bool operator==(const CellSet&) const = default;

    std::string to_string() const;

private:
    std::vector<Vertex> v_;
};

struct CellSetHash {
    std::size_t operator()(const CellSet& c) const noexcept;
};

struct RankedCell {
    CellSet cell;
    int rank = 0;
};

/// Position of a cell inside a complex: its rank and its index within that rank.
struct CellRef {
    int rank = -1;
    std::size_t index = 0;
    auto operator<=>(const CellRef&) const = default;
};

/**
 * Immutable combinatorial complex on vertices 0..vertex_count-1.
 *
 * Cells of each rank are kept in lexicographic order of their vertex
 * tuples; this order defines the rows and columns of every matrix built
 * from the complex.
 */
class CombinatorialComplex {
public:
    CombinatorialComplex() = default;

    std::size_t vertex_count() const noexcept { return vertex_count_; }
    /// Largest rank present, or -1 for the empty complex.
    int dim() const noexcept { return static_cast<int>(by_rank_.size()) - 1; }
    std::size_t cell_count() const noexcept { return lookup_.size(); }
    std::size_t rank_size(int k) const;
    const std::vector<CellSet>& cells(int k) const;
    const CellSet& cell(CellRef ref) const { return by_rank_.at(ref.rank).at(ref.index); }

    std::optional<int> rank_of(const CellSet& c) const;
    std::optional<CellRef> find(const CellSet& c) const;
    bool contains(const CellSet& c) const { return lookup_.count(c) != 0; }

    /// Every cell as (cell, rank), ordered by rank and then canonically.
    std::vector<RankedCell> ranked_cells() const;

    /// Cells of rank k whose smallest vertex lies in the given cell.
    /// Any subset of the cell is among them.
    std::vector<std::size_t> subset_candidates(const CellSet& c, int k) const;
    /// Cells of rank k that contain vertex v.
    const std::vector<std::size_t>& star(Vertex v, int k) const;

    bool operator==(const CombinatorialComplex& other) const {
        return vertex_count_ == other.vertex_count_ && by_rank_ == other.by_rank_;
    }

private:
    friend CombinatorialComplex build_cc(std::size_t, const std::vector<RankedCell>&);

    std::size_t vertex_count_ = 0;
    std::vector<std::vector<CellSet>> by_rank_;
    std::unordered_map<CellSet, CellRef, CellSetHash> lookup_;
    // star_[k][v]: indices of rank-k cells containing v
    std::vector<std::vector<std::vector<std::size_t>>> star_;
    // min_[k][v]: indices of rank-k cells whose smallest vertex is v
    std::vector<std::vector<std::vector<std::size_t>>> min_;
};

/**
 * Builds and validates a complex. Singletons missing from the input are
 * added at rank 0.
 *
 * @throws Error with EmptyCell, VertexOutOfRange, InvalidRank, DuplicateCell
 *         or OrderViolation.
 */
CombinatorialComplex build_cc(std::size_t vertex_count, const std::vector<RankedCell>& cells);

/// Cells of a parent complex kept with their parent ranks.
struct SubCC {
    std::vector<Vertex> vertices;  // sorted
    std::vector<RankedCell> cells;

    bool contains(const CellSet& c) const;
    /// Rebuilds the retained cells as a complex with vertices relabelled
    /// 0..|vertices|-1 in increasing order.
    CombinatorialComplex to_complex() const;
};

SubCC induced_sub_cc(const CombinatorialComplex& cc, const std::vector<Vertex>& A);
SubCC skeleton(const CombinatorialComplex& cc, int k);

enum class MapKind { Embedding, Homomorphism, Invalid };

enum class MapDefect { None, NotTotal, MissingImageCell, InclusionNotPreserved, RankIncreased };

struct MapCheck {
    MapKind kind = MapKind::Invalid;
    MapDefect defect = MapDefect::None;
    std::string reason;
};

using CellMap = std::map<CellSet, CellSet>;

/// Classifies f as an embedding, a homomorphism, or invalid with a reason.
MapCheck check_homomorphism(const CellMap& f, const CombinatorialComplex& src,
                            const CombinatorialComplex& dst);

/// The cell map induced by a vertex map: f(x) = {vmap[v] : v in x}. Images
/// that are not cells of dst are kept so check_homomorphism can report them.
CellMap induced_cell_map(const CombinatorialComplex& src, const std::vector<Vertex>& vmap);

CellMap identity_map(const CombinatorialComplex& cc);

}  // namespace ccx
