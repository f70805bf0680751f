#include "ccx/complex.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace ccx {

CellSet::CellSet(std::vector<Vertex> vertices) : v_(std::move(vertices)) {
    std::sort(v_.begin(), v_.end());
    v_.erase(std::unique(v_.begin(), v_.end()), v_.end());
}

CellSet::CellSet(std::initializer_list<Vertex> vertices)
    : CellSet(std::vector<Vertex>(vertices)) {}

bool CellSet::contains(Vertex v) const { return std::binary_search(v_.begin(), v_.end(), v); }

bool CellSet::subset_of(const CellSet& other) const {
    if (v_.size() > other.v_.size()) return false;
    return std::includes(other.v_.begin(), other.v_.end(), v_.begin(), v_.end());
}

bool CellSet::intersects(const CellSet& other) const {
    auto a = v_.begin();
    auto b = other.v_.begin();
    while (a != v_.end() && b != other.v_.end()) {
        if (*a == *b) return true;
        if (*a < *b) ++a; else ++b;
    }
    return false;
}

std::string CellSet::to_string() const {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < v_.size(); ++i) os << (i ? "," : "") << v_[i];
    os << '}';
    return os.str();
}

std::size_t CellSetHash::operator()(const CellSet& c) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (Vertex v : c.vertices()) {
        h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
}

std::size_t CombinatorialComplex::rank_size(int k) const {
    if (k < 0 || k > dim()) return 0;
    return by_rank_[k].size();
}

const std::vector<CellSet>& CombinatorialComplex::cells(int k) const {
    static const std::vector<CellSet> none;
    if (k < 0 || k > dim()) return none;
    return by_rank_[k];
}

std::optional<int> CombinatorialComplex::rank_of(const CellSet& c) const {
    auto it = lookup_.find(c);
    if (it == lookup_.end()) return std::nullopt;
    return it->second.rank;
}

std::optional<CellRef> CombinatorialComplex::find(const CellSet& c) const {
    auto it = lookup_.find(c);
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
}

std::vector<RankedCell> CombinatorialComplex::ranked_cells() const {
    std::vector<RankedCell> out;
    out.reserve(cell_count());
    for (int k = 0; k <= dim(); ++k)
        for (const auto& c : by_rank_[k]) out.push_back({c, k});
    return out;
}

std::vector<std::size_t> CombinatorialComplex::subset_candidates(const CellSet& c, int k) const {
    std::vector<std::size_t> out;
    if (k < 0 || k > dim()) return out;
    for (Vertex v : c.vertices()) {
        if (v >= vertex_count_) continue;
        const auto& m = min_[k][v];
        out.insert(out.end(), m.begin(), m.end());
    }
    return out;
}

const std::vector<std::size_t>& CombinatorialComplex::star(Vertex v, int k) const {
    static const std::vector<std::size_t> none;
    if (k < 0 || k > dim() || v >= vertex_count_) return none;
    return star_[k][v];
}

CombinatorialComplex build_cc(std::size_t vertex_count, const std::vector<RankedCell>& input) {
    std::map<CellSet, int> ranks;
    for (const auto& rc : input) {
        if (rc.cell.empty()) throw Error(ErrorCode::EmptyCell, "cell with no vertices");
        if (rc.rank < 0)
            throw Error(ErrorCode::InvalidRank, rc.cell.to_string() + " has negative rank");
        if (rc.cell.back() >= vertex_count)
            throw Error(ErrorCode::VertexOutOfRange,
                        rc.cell.to_string() + " exceeds vertex count " + std::to_string(vertex_count));
        if (rc.cell.size() == 1 && rc.rank != 0)
            throw Error(ErrorCode::InvalidRank, "singleton " + rc.cell.to_string() + " must have rank 0");
        auto [it, inserted] = ranks.emplace(rc.cell, rc.rank);
        if (!inserted && it->second != rc.rank)
            throw Error(ErrorCode::DuplicateCell,
                        rc.cell.to_string() + " given ranks " + std::to_string(it->second) + " and " +
                            std::to_string(rc.rank));
    }
    for (Vertex v = 0; v < vertex_count; ++v) ranks.emplace(CellSet{v}, 0);

    CombinatorialComplex cc;
    cc.vertex_count_ = vertex_count;
    int top = -1;
    for (const auto& [c, r] : ranks) top = std::max(top, r);
    cc.by_rank_.assign(top + 1, {});
    // std::map iterates in lexicographic order, which is the canonical order.
    for (const auto& [c, r] : ranks) cc.by_rank_[r].push_back(c);
    // Ranks with no cells are allowed between populated ones.
    cc.star_.assign(top + 1, std::vector<std::vector<std::size_t>>(vertex_count));
    cc.min_.assign(top + 1, std::vector<std::vector<std::size_t>>(vertex_count));
    for (int k = 0; k <= top; ++k) {
        const auto& cells = cc.by_rank_[k];
        for (std::size_t i = 0; i < cells.size(); ++i) {
            cc.lookup_.emplace(cells[i], CellRef{k, i});
            cc.min_[k][cells[i].front()].push_back(i);
            for (Vertex v : cells[i].vertices()) cc.star_[k][v].push_back(i);
        }
    }

    // Order check: every subset x of y must satisfy rk(x) <= rk(y).
    for (int ky = 0; ky <= top; ++ky) {
        for (const auto& y : cc.by_rank_[ky]) {
            for (int kx = ky + 1; kx <= top; ++kx) {
                for (std::size_t ix : cc.subset_candidates(y, kx)) {
                    const auto& x = cc.by_rank_[kx][ix];
                    if (x.subset_of(y))
                        throw Error(ErrorCode::OrderViolation,
                                    x.to_string() + " (rank " + std::to_string(kx) + ") is inside " +
                                        y.to_string() + " (rank " + std::to_string(ky) + ")");
                }
            }
        }
    }
    return cc;
}

bool SubCC::contains(const CellSet& c) const {
    return std::any_of(cells.begin(), cells.end(), [&](const RankedCell& rc) { return rc.cell == c; });
}

CombinatorialComplex SubCC::to_complex() const {
    std::unordered_map<Vertex, Vertex> relabel;
    for (std::size_t i = 0; i < vertices.size(); ++i) relabel[vertices[i]] = static_cast<Vertex>(i);
    std::vector<RankedCell> out;
    out.reserve(cells.size());
    for (const auto& rc : cells) {
        std::vector<Vertex> vs;
        for (Vertex v : rc.cell.vertices()) vs.push_back(relabel.at(v));
        out.push_back({CellSet(std::move(vs)), rc.rank});
    }
    return build_cc(vertices.size(), out);
}

SubCC induced_sub_cc(const CombinatorialComplex& cc, const std::vector<Vertex>& A) {
    SubCC sub;
    std::set<Vertex> keep;
    for (Vertex v : A)
        if (v < cc.vertex_count()) keep.insert(v);
    sub.vertices.assign(keep.begin(), keep.end());
    if (sub.vertices.empty()) return sub;
    const CellSet a(sub.vertices);
    for (const auto& rc : cc.ranked_cells())
        if (rc.cell.subset_of(a)) sub.cells.push_back(rc);
    return sub;
}

SubCC skeleton(const CombinatorialComplex& cc, int k) {
    SubCC sub;
    for (Vertex v = 0; v < cc.vertex_count(); ++v) sub.vertices.push_back(v);
    for (int r = 0; r <= std::min(k, cc.dim()); ++r)
        for (const auto& c : cc.cells(r)) sub.cells.push_back({c, r});
    return sub;
}

MapCheck check_homomorphism(const CellMap& f, const CombinatorialComplex& src,
                            const CombinatorialComplex& dst) {
    auto invalid = [](MapDefect d, std::string why) { return MapCheck{MapKind::Invalid, d, std::move(why)}; };
    const auto cells = src.ranked_cells();
    std::vector<const CellSet*> image(cells.size());
    std::vector<int> image_rank(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        auto it = f.find(cells[i].cell);
        if (it == f.end()) return invalid(MapDefect::NotTotal, "no image for " + cells[i].cell.to_string());
        auto r = dst.rank_of(it->second);
        if (!r)
            return invalid(MapDefect::MissingImageCell,
                           it->second.to_string() + " is not a cell of the target");
        if (*r > cells[i].rank)
            return invalid(MapDefect::RankIncreased, cells[i].cell.to_string() + " maps to higher rank");
        image[i] = &it->second;
        image_rank[i] = *r;
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        for (std::size_t j = 0; j < cells.size(); ++j) {
            if (i != j && cells[i].cell.subset_of(cells[j].cell) && !image[i]->subset_of(*image[j]))
                return invalid(MapDefect::InclusionNotPreserved,
                               cells[i].cell.to_string() + " inside " + cells[j].cell.to_string() +
                                   " but images are not nested");
        }
    }
    bool injective = true;
    std::set<CellSet> seen;
    for (const auto* im : image) injective = seen.insert(*im).second && injective;
    bool rank_preserving = true;
    for (std::size_t i = 0; i < cells.size(); ++i) rank_preserving &= image_rank[i] == cells[i].rank;
    return {injective && rank_preserving ? MapKind::Embedding : MapKind::Homomorphism, MapDefect::None, {}};
}

CellMap induced_cell_map(const CombinatorialComplex& src, const std::vector<Vertex>& vmap) {
    CellMap f;
    for (const auto& rc : src.ranked_cells()) {
        std::vector<Vertex> img;
        for (Vertex v : rc.cell.vertices()) img.push_back(vmap.at(v));
        f.emplace(rc.cell, CellSet(std::move(img)));
    }
    return f;
}

CellMap identity_map(const CombinatorialComplex& cc) {
    CellMap f;
    for (const auto& rc : cc.ranked_cells()) f.emplace(rc.cell, rc.cell);
    return f;
}

}  // namespace ccx
