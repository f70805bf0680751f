#include "ccx/cochain.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include "ccx/lifting.hpp"

namespace ccx {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::ShapeMismatch, what);
}

std::string shape(const SparseMatrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

void check_domain(const CochainMap& g, const Cochain& h) {
    require(h.rank == g.domain_rank, "cochain of rank " + std::to_string(h.rank) + " fed to a map from rank " +
                                         std::to_string(g.domain_rank));
    require(h.rows() == g.matrix.cols(), "cochain with " + std::to_string(h.rows()) + " rows fed to " +
                                             shape(g.matrix) + " map");
}

Cochain apply_rows(const Cochain& c, const RowMap& f) {
    if (c.rows() == 0) return c;
    Cochain out{c.rank, {}};
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
        RowVector r = f(c.data.row(i));
        if (i == 0) out.data.resize(c.rows(), r.size());
        out.data.row(i) = r;
    }
    return out;
}

}  // namespace

CochainMap CochainMap::from(const NeighborhoodMatrix& n) { return {n.matrix, n.col_rank, n.row_rank}; }

CochainMap CochainMap::transposed() const {
    SparseMatrix t = matrix.transpose();
    t.makeCompressed();
    return {t, codomain_rank, domain_rank};
}

CochainMap CochainMap::zero() const {
    return {SparseMatrix(matrix.rows(), matrix.cols()), domain_rank, codomain_rank};
}

namespace rowmap {
RowMap identity() {
    return [](const RowVector& h) { return h; };
}
RowMap tanh() {
    return [](const RowVector& h) -> RowVector { return h.array().tanh(); };
}
RowMap relu() {
    return [](const RowVector& h) -> RowVector { return h.array().max(0.0); };
}
RowMap affine(Matrix w, RowVector b) {
    return [w = std::move(w), b = std::move(b)](const RowVector& h) -> RowVector { return h * w + b; };
}
}  // namespace rowmap

Cochain apply_map(const CochainMap& g, const Cochain& h) {
    check_domain(g, h);
    return {g.codomain_rank, g.matrix * h.data};
}

Cochain push_forward(const CochainMap& g, const Cochain& h, Aggregation agg, const RowMap& alpha) {
    check_domain(g, h);
    const Cochain mapped = apply_rows(h, alpha);
    const Eigen::Index d = h.rows() > 0 ? mapped.dim() : h.dim();
    Cochain out{g.codomain_rank, Matrix::Zero(g.matrix.rows(), d)};
    for (int y = 0; y < g.matrix.outerSize(); ++y) {
        int count = 0;
        for (SparseMatrix::InnerIterator it(g.matrix, y); it; ++it) {
            if (it.value() == 0.0) continue;
            const auto row = mapped.data.row(it.col());
            if (agg == Aggregation::Max && count > 0)
                out.data.row(y) = out.data.row(y).cwiseMax(row);
            else if (agg == Aggregation::Max)
                out.data.row(y) = row;
            else
                out.data.row(y) += row;
            ++count;
        }
        if (agg == Aggregation::Mean && count > 0) out.data.row(y) /= count;
    }
    return out;
}

Cochain merge_node(const CochainMap& g1, const CochainMap& g2, const Cochain& h1, const Cochain& h2,
                   Combine combine, const RowMap& beta) {
    require(g1.codomain_rank == g2.codomain_rank && g1.matrix.rows() == g2.matrix.rows(),
            "merge branches land on different cochain spaces");
    const Cochain a = push_forward(g1, h1, Aggregation::Sum);
    const Cochain b = push_forward(g2, h2, Aggregation::Sum);
    Cochain m{g1.codomain_rank, {}};
    if (combine == Combine::Sum) {
        require(a.dim() == b.dim(), "sum merge of widths " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
        m.data = a.data + b.data;
    } else {
        m.data.resize(a.rows(), a.dim() + b.dim());
        m.data << a.data, b.data;
    }
    return apply_rows(m, beta);
}

std::pair<Cochain, Cochain> split_node(const CochainMap& g1, const CochainMap& g2, const Cochain& h,
                                       const RowMap& beta1, const RowMap& beta2) {
    return {apply_rows(push_forward(g1, h, Aggregation::Sum), beta1),
            apply_rows(push_forward(g2, h, Aggregation::Sum), beta2)};
}

Cochain pairwise_merge(const CochainMap& g, const Cochain& receivers, const Cochain& senders,
                       const PairMap& alpha, Aggregation agg, Eigen::Index out_dim) {
    check_domain(g, senders);
    require(receivers.rank == g.codomain_rank && receivers.rows() == g.matrix.rows(),
            "receiving cochain does not match the codomain of the map");
    Cochain out{g.codomain_rank, Matrix::Zero(g.matrix.rows(), out_dim)};
    for (int y = 0; y < g.matrix.outerSize(); ++y) {
        int count = 0;
        const RowVector hy = receivers.data.row(y);
        for (SparseMatrix::InnerIterator it(g.matrix, y); it; ++it) {
            if (it.value() == 0.0) continue;
            const RowVector m = alpha(hy, senders.data.row(it.col()));
            require(m.size() == out_dim, "message width differs from declared width");
            if (agg == Aggregation::Max && count > 0)
                out.data.row(y) = out.data.row(y).cwiseMax(m);
            else if (agg == Aggregation::Max)
                out.data.row(y) = m;
            else
                out.data.row(y) += m;
            ++count;
        }
        if (agg == Aggregation::Mean && count > 0) out.data.row(y) /= count;
    }
    return out;
}

MapClass classify_map(const CochainMap& g) {
    if (g.codomain_rank > g.domain_rank) return MapClass::Pooling;
    if (g.codomain_rank < g.domain_rank) return MapClass::Unpooling;
    return MapClass::RankPreserving;
}

const char* map_class_name(MapClass c) {
    switch (c) {
        case MapClass::Pooling: return "pooling";
        case MapClass::Unpooling: return "unpooling";
        case MapClass::RankPreserving: return "rank-preserving";
    }
    return "rank-preserving";
}

GraphPool graph_pool_via_clusters(const Graph& g, const std::vector<std::vector<Vertex>>& clusters,
                                  const Cochain& h0, Aggregation agg) {
    std::vector<int> seen(g.vertex_count, 0);
    for (const auto& c : clusters) {
        if (c.empty()) throw Error(ErrorCode::NotAPartition, "empty cluster");
        for (Vertex v : c) {
            if (v >= g.vertex_count) throw Error(ErrorCode::NotAPartition, "cluster vertex out of range");
            ++seen[v];
        }
    }
    for (Vertex v = 0; v < g.vertex_count; ++v)
        if (seen[v] != 1)
            throw Error(ErrorCode::NotAPartition, "vertex " + std::to_string(v) + " covered " +
                                                      std::to_string(seen[v]) + " times");
    const CombinatorialComplex base = graph_cc(g);
    std::vector<CellSet> cells;
    for (const auto& c : clusters) {
        CellSet s(c);
        if (!base.contains(s)) cells.push_back(std::move(s));
    }
    if (cells.empty()) throw Error(ErrorCode::EmptyAugmentation, "every cluster is already a cell");
    GraphPool out{augment_at_rank(base, cells, 2), {}};
    const CochainMap down = CochainMap::from(incidence(out.cc, 0, 2)).transposed();
    out.pooled = push_forward(down, h0, agg);
    return out;
}

void write_cochain(std::ostream& os, const Cochain& c) {
    os << c.rank << ' ' << c.dim() << ' ' << c.rows() << '\n';
    char buf[64];
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
        for (Eigen::Index j = 0; j < c.dim(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", c.data(i, j));
            os << (j ? " " : "") << buf;
        }
        os << '\n';
    }
}

Cochain read_cochain(std::istream& is) {
    std::vector<double> values;
    std::string line;
    long header[3] = {0, 0, 0};
    int got = 0;
    while (std::getline(is, line)) {
        auto p = line.find_first_not_of(" \t\r");
        if (p == std::string::npos || line[p] == '#') continue;
        std::istringstream ls(line);
        if (got < 3) {
            while (got < 3 && ls >> header[got]) ++got;
            if (got < 3 && !ls.eof()) throw Error(ErrorCode::ParseError, "bad cochain header");
        }
        double v;
        while (ls >> v) values.push_back(v);
        if (!ls.eof()) throw Error(ErrorCode::ParseError, "non-numeric cochain entry: " + line);
        // Stop at the last row so several cochains can share one stream.
        if (got == 3 && header[1] >= 0 && header[2] >= 0 && static_cast<long>(values.size()) >= header[1] * header[2])
            break;
    }
    if (got < 3 || header[1] < 0 || header[2] < 0) throw Error(ErrorCode::ParseError, "missing cochain header");
    const long d = header[1], rows = header[2];
    if (static_cast<long>(values.size()) != d * rows)
        throw Error(ErrorCode::ParseError, "expected " + std::to_string(d * rows) + " values, read " +
                                               std::to_string(values.size()));
    Cochain c{static_cast<int>(header[0]), Matrix(rows, d)};
    for (long i = 0; i < rows; ++i)
        for (long j = 0; j < d; ++j) c.data(i, j) = values[i * d + j];
    return c;
}

}  // namespace ccx
