#include "ccx/neighborhood.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace ccx {

namespace {

using Triplet = Eigen::Triplet<double>;

SparseMatrix from_pairs(Eigen::Index rows, Eigen::Index cols,
                        const std::set<std::pair<std::size_t, std::size_t>>& pairs) {
    std::vector<Triplet> t;
    t.reserve(pairs.size());
    for (auto [i, j] : pairs) t.emplace_back(static_cast<int>(i), static_cast<int>(j), 1.0);
    SparseMatrix m(rows, cols);
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    return m;
}

void check_rank(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::RankOutOfRange, what);
}

std::string rk(int r, int k) { return "(" + std::to_string(r) + "," + std::to_string(k) + ")"; }

// r-cells contained in z (possibly equal to z when r is z's rank).
std::vector<std::size_t> cells_inside(const CombinatorialComplex& cc, const CellSet& z, int r) {
    std::vector<std::size_t> out;
    for (std::size_t i : cc.subset_candidates(z, r))
        if (cc.cells(r)[i].subset_of(z)) out.push_back(i);
    return out;
}

// r-cells containing z.
std::vector<std::size_t> cells_around(const CombinatorialComplex& cc, const CellSet& z, int r) {
    std::vector<std::size_t> out;
    for (std::size_t i : cc.star(z.front(), r))
        if (z.subset_of(cc.cells(r)[i])) out.push_back(i);
    return out;
}

}  // namespace

NeighborhoodMatrix incidence(const CombinatorialComplex& cc, int r, int k) {
    check_rank(0 <= r && r < k && k <= cc.dim(), "incidence " + rk(r, k) + " with dim " + std::to_string(cc.dim()));
    std::set<std::pair<std::size_t, std::size_t>> pairs;
    const auto& ys = cc.cells(k);
    for (std::size_t j = 0; j < ys.size(); ++j)
        for (std::size_t i : cells_inside(cc, ys[j], r)) pairs.emplace(i, j);
    return {NeighborhoodKind::Incidence, r, k,
            from_pairs(cc.rank_size(r), cc.rank_size(k), pairs)};
}

NeighborhoodMatrix adjacency(const CombinatorialComplex& cc, int r, int k) {
    check_rank(r >= 0 && k >= 1 && r + k <= cc.dim(), "adjacency " + rk(r, k) + " with dim " + std::to_string(cc.dim()));
    std::set<std::pair<std::size_t, std::size_t>> pairs;
    for (const auto& z : cc.cells(r + k)) {
        const auto inside = cells_inside(cc, z, r);
        for (std::size_t a : inside)
            for (std::size_t b : inside)
                if (a != b) pairs.emplace(a, b);
    }
    const auto n = cc.rank_size(r);
    return {NeighborhoodKind::Adjacency, r, r, from_pairs(n, n, pairs)};
}

NeighborhoodMatrix coadjacency(const CombinatorialComplex& cc, int r, int k) {
    check_rank(1 <= k && k <= r && r <= cc.dim(), "coadjacency " + rk(r, k) + " with dim " + std::to_string(cc.dim()));
    std::set<std::pair<std::size_t, std::size_t>> pairs;
    for (const auto& z : cc.cells(r - k)) {
        const auto around = cells_around(cc, z, r);
        for (std::size_t a : around)
            for (std::size_t b : around)
                if (a != b) pairs.emplace(a, b);
    }
    const auto n = cc.rank_size(r);
    return {NeighborhoodKind::Coadjacency, r, r, from_pairs(n, n, pairs)};
}

NeighborhoodMatrix signed_incidence(const CombinatorialComplex& cc, int r) {
    check_rank(r >= 0 && r + 1 <= cc.dim(), "signed incidence at rank " + std::to_string(r));
    std::vector<Triplet> t;
    const auto& tops = cc.cells(r + 1);
    for (std::size_t j = 0; j < tops.size(); ++j) {
        const auto& s = tops[j];
        if (s.size() != static_cast<std::size_t>(r + 2))
            throw Error(ErrorCode::NotOrientable, s.to_string() + " is not a simplex of rank " + std::to_string(r + 1));
        for (std::size_t i : cells_inside(cc, s, r))
            if (cc.cells(r)[i].size() != static_cast<std::size_t>(r + 1))
                throw Error(ErrorCode::NotOrientable,
                            cc.cells(r)[i].to_string() + " is inside " + s.to_string() + " but is not a face");
        const auto& v = s.vertices();
        for (std::size_t omit = 0; omit < v.size(); ++omit) {
            std::vector<Vertex> face;
            for (std::size_t q = 0; q < v.size(); ++q)
                if (q != omit) face.push_back(v[q]);
            auto ref = cc.find(CellSet(face));
            if (!ref || ref->rank != r)
                throw Error(ErrorCode::NotOrientable,
                            "face " + CellSet(face).to_string() + " of " + s.to_string() + " is not a rank-" +
                                std::to_string(r) + " cell");
            t.emplace_back(static_cast<int>(ref->index), static_cast<int>(j), omit % 2 == 0 ? 1.0 : -1.0);
        }
    }
    SparseMatrix m(cc.rank_size(r), cc.rank_size(r + 1));
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    return {NeighborhoodKind::SignedIncidence, r, r + 1, m};
}

NeighborhoodMatrix identity(const CombinatorialComplex& cc, int r) {
    const auto n = static_cast<Eigen::Index>(cc.rank_size(r));
    SparseMatrix m(n, n);
    m.setIdentity();
    m.makeCompressed();
    return {NeighborhoodKind::Identity, r, r, m};
}

Matrix hodge_laplacian_1(const CombinatorialComplex& cc) {
    check_rank(cc.dim() >= 1, "hodge laplacian needs dimension at least one");
    const SparseMatrix b0 = signed_incidence(cc, 0).matrix;
    SparseMatrix l = SparseMatrix(b0.transpose()) * b0;
    if (cc.dim() >= 2 && cc.rank_size(2) > 0) {
        const SparseMatrix b1 = signed_incidence(cc, 1).matrix;
        l = SparseMatrix(l + SparseMatrix(b1 * SparseMatrix(b1.transpose())));
    }
    return to_dense(l);
}

UpDown up_down_incidence_sets(const CombinatorialComplex& cc, const CellSet& x, int k) {
    auto r = cc.rank_of(x);
    if (!r) throw Error(ErrorCode::UnknownCell, x.to_string());
    if (k < 0) throw Error(ErrorCode::RankOutOfRange, "negative offset");
    UpDown out;
    if (*r - k >= 0)
        for (std::size_t i : cells_inside(cc, x, *r - k))
            if (cc.cells(*r - k)[i] != x) out.down.insert(cc.cells(*r - k)[i]);
    if (*r + k <= cc.dim())
        for (std::size_t i : cells_around(cc, x, *r + k))
            if (cc.cells(*r + k)[i] != x) out.up.insert(cc.cells(*r + k)[i]);
    return out;
}

UpDown up_down_sets(const CombinatorialComplex& cc, const CellSet& x) {
    if (!cc.contains(x)) throw Error(ErrorCode::UnknownCell, x.to_string());
    UpDown out;
    for (const auto& rc : cc.ranked_cells()) {
        if (rc.cell.proper_subset_of(x)) out.down.insert(rc.cell);
        if (x.proper_subset_of(rc.cell)) out.up.insert(rc.cell);
    }
    return out;
}

SparseMatrix sym_normalize(const SparseMatrix& g) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(g.rows());
    Eigen::VectorXd col = Eigen::VectorXd::Zero(g.cols());
    for (int i = 0; i < g.outerSize(); ++i)
        for (SparseMatrix::InnerIterator it(g, i); it; ++it) {
            row[it.row()] += std::abs(it.value());
            col[it.col()] += std::abs(it.value());
        }
    SparseMatrix out = g;
    for (int i = 0; i < out.outerSize(); ++i)
        for (SparseMatrix::InnerIterator it(out, i); it; ++it) {
            const double d = row[it.row()] * col[it.col()];
            it.valueRef() = d > 0 ? it.value() / std::sqrt(d) : 0.0;
        }
    return out;
}

SparseMatrix binary_pattern(const SparseMatrix& g) {
    SparseMatrix out = g;
    out.prune(0.0, 0.0);
    for (int i = 0; i < out.outerSize(); ++i)
        for (SparseMatrix::InnerIterator it(out, i); it; ++it) it.valueRef() = 1.0;
    return out;
}

SparseMatrix off_diagonal_pattern(const SparseMatrix& g) {
    SparseMatrix out = binary_pattern(g);
    out.prune([](Eigen::Index i, Eigen::Index j, double) { return i != j; });
    return out;
}

Matrix to_dense(const SparseMatrix& g) {
    if (static_cast<double>(g.rows()) * static_cast<double>(g.cols()) >= 1e6)
        throw Error(ErrorCode::TooLarge, "dense copy of " + std::to_string(g.rows()) + "x" + std::to_string(g.cols()));
    return Matrix(g);
}

bool same_pattern(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    SparseMatrix pa = binary_pattern(a), pb = binary_pattern(b);
    if (pa.nonZeros() != pb.nonZeros()) return false;
    return SparseMatrix(pa - pb).norm() == 0.0;
}

Eigen::VectorXd symmetric_eigenvalues(const Matrix& m) {
    if (m.rows() != m.cols()) throw Error(ErrorCode::ShapeMismatch, "eigenvalues of a non-square matrix");
    if (m.rows() > 2000) throw Error(ErrorCode::TooLarge, "dense eigen-solver is limited to 2000 rows");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

void write_triplets(std::ostream& os, const SparseMatrix& m) {
    os << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
    char buf[64];
    for (int i = 0; i < m.outerSize(); ++i)
        for (SparseMatrix::InnerIterator it(m, i); it; ++it) {
            std::snprintf(buf, sizeof buf, "%.17g", it.value());
            os << it.row() << ' ' << it.col() << ' ' << buf << '\n';
        }
}

SparseMatrix read_triplets(std::istream& is) {
    std::string line;
    auto next = [&](std::istringstream& ls) {
        while (std::getline(is, line)) {
            auto p = line.find_first_not_of(" \t\r");
            if (p == std::string::npos || line[p] == '#') continue;
            ls = std::istringstream(line);
            return true;
        }
        return false;
    };
    std::istringstream ls;
    long rows = 0, cols = 0, nnz = 0;
    if (!next(ls) || !(ls >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0)
        throw Error(ErrorCode::ParseError, "bad triplet header");
    std::vector<Triplet> t;
    for (long n = 0; n < nnz; ++n) {
        long i = 0, j = 0;
        double v = 0;
        if (!next(ls) || !(ls >> i >> j >> v))
            throw Error(ErrorCode::ParseError, "expected " + std::to_string(nnz) + " triplets");
        if (i < 0 || i >= rows || j < 0 || j >= cols)
            throw Error(ErrorCode::ParseError, "triplet index out of range");
        t.emplace_back(static_cast<int>(i), static_cast<int>(j), v);
    }
    SparseMatrix m(rows, cols);
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    return m;
}

std::string kind_name(NeighborhoodKind kind) {
    switch (kind) {
        case NeighborhoodKind::Incidence: return "incidence";
        case NeighborhoodKind::Adjacency: return "adjacency";
        case NeighborhoodKind::Coadjacency: return "coadjacency";
        case NeighborhoodKind::SignedIncidence: return "signed_incidence";
        case NeighborhoodKind::Identity: return "identity";
        case NeighborhoodKind::Custom: return "custom";
    }
    return "custom";
}

}  // namespace ccx
