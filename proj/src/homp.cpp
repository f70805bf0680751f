#include "ccx/homp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ccx {

namespace {

void validate(const CombinatorialComplex& cc, const RankCochains& h, const HompConfig& cfg) {
    for (int k = 0; k <= cc.dim(); ++k) {
        auto it = h.find(k);
        if (it == h.end()) throw Error(ErrorCode::ShapeMismatch, "no cochain for rank " + std::to_string(k));
        if (it->second.rows() != static_cast<Eigen::Index>(cc.rank_size(k)))
            throw Error(ErrorCode::ShapeMismatch, "rank " + std::to_string(k) + " cochain has the wrong row count");
    }
    for (const auto& n : cfg.neighborhoods) {
        if (!h.count(n.target_rank) || !h.count(n.source_rank))
            throw Error(ErrorCode::ShapeMismatch, "neighborhood refers to a rank without a cochain");
        if (n.matrix.rows() != h.at(n.target_rank).rows() || n.matrix.cols() != h.at(n.source_rank).rows())
            throw Error(ErrorCode::ShapeMismatch, "neighborhood matrix does not match its ranks");
        if (!n.alpha) throw Error(ErrorCode::BadParams, "neighborhood without a message function");
    }
    if (!cfg.beta) throw Error(ErrorCode::BadParams, "missing update function");
}

std::map<int, std::vector<std::size_t>> by_target(const HompConfig& cfg) {
    std::map<int, std::vector<std::size_t>> out;
    for (std::size_t k = 0; k < cfg.neighborhoods.size(); ++k) out[cfg.neighborhoods[k].target_rank].push_back(k);
    return out;
}

RowVector fold(const std::vector<RowVector>& parts, Combine inter) {
    RowVector m = parts.front();
    for (std::size_t k = 1; k < parts.size(); ++k) {
        if (inter == Combine::Sum) {
            if (parts[k].size() != m.size())
                throw Error(ErrorCode::ShapeMismatch, "sum over neighborhoods with different message widths");
            m += parts[k];
        } else {
            RowVector c(m.size() + parts[k].size());
            c << m, parts[k];
            m = std::move(c);
        }
    }
    return m;
}

// Weighted intra-neighborhood aggregation of alpha messages for one cell.
RowVector gather(const HompNeighborhood& n, Eigen::Index x, const Matrix& ht, const Matrix& hs, Aggregation agg,
                 const ScoreMap* score) {
    std::vector<Eigen::Index> nbrs;
    for (SparseMatrix::InnerIterator it(n.matrix, static_cast<int>(x)); it; ++it)
        if (it.value() != 0.0) nbrs.push_back(it.col());
    RowVector m = RowVector::Zero(n.message_dim);
    if (nbrs.empty()) return m;
    std::vector<double> w(nbrs.size(), 1.0);
    if (score) {
        std::vector<double> s(nbrs.size());
        for (std::size_t i = 0; i < nbrs.size(); ++i) s[i] = *score ? (*score)(ht.row(x), hs.row(nbrs[i])) : 0.0;
        const double mx = *std::max_element(s.begin(), s.end());
        double z = 0;
        for (std::size_t i = 0; i < s.size(); ++i) z += (w[i] = std::exp(s[i] - mx));
        for (double& v : w) v /= z;
    }
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
        const RowVector msg = w[i] * n.alpha(ht.row(x), hs.row(nbrs[i]));
        if (msg.size() != n.message_dim) throw Error(ErrorCode::ShapeMismatch, "message width differs from declared width");
        if (agg == Aggregation::Max && i > 0) m = m.cwiseMax(msg);
        else if (agg == Aggregation::Max) m = msg;
        else m += msg;
    }
    if (agg == Aggregation::Mean) m /= static_cast<double>(nbrs.size());
    return m;
}

RankCochains step(const CombinatorialComplex& cc, const RankCochains& h, const HompConfig& cfg,
                  const std::vector<ScoreMap>* scores, const std::vector<double>* b) {
    validate(cc, h, cfg);
    RankCochains out = h;
    for (const auto& [rank, ks] : by_target(cfg)) {
        const Matrix& ht = h.at(rank);
        Matrix next;
        for (Eigen::Index x = 0; x < ht.rows(); ++x) {
            std::vector<RowVector> parts;
            for (std::size_t k : ks) {
                const auto& n = cfg.neighborhoods[k];
                const ScoreMap* s = scores ? &(*scores)[k] : nullptr;
                RowVector m = gather(n, x, ht, h.at(n.source_rank), cfg.intra, s);
                if (b) m *= (*b)[k];
                parts.push_back(std::move(m));
            }
            const RowVector upd = cfg.beta(ht.row(x), fold(parts, cfg.inter));
            if (x == 0) next.resize(ht.rows(), upd.size());
            next.row(x) = upd;
        }
        if (ht.rows() == 0) next.resize(0, ht.cols());
        out[rank] = std::move(next);
    }
    return out;
}

}  // namespace

RankCochains homp_step(const CombinatorialComplex& cc, const RankCochains& h, const HompConfig& cfg) {
    return step(cc, h, cfg, nullptr, nullptr);
}

RankCochains homp_via_merge_nodes(const CombinatorialComplex& cc, const RankCochains& h, const HompConfig& cfg) {
    validate(cc, h, cfg);
    RankCochains out = h;
    for (const auto& [rank, ks] : by_target(cfg)) {
        const Cochain xj{rank, h.at(rank)};
        const auto n = xj.rows();
        SparseMatrix id(n, n);
        id.setIdentity();
        const CochainMap idj{id, rank, rank};
        Cochain acc;
        for (std::size_t i = 0; i < ks.size(); ++i) {
            const auto& nb = cfg.neighborhoods[ks[i]];
            const Cochain y = pairwise_merge(CochainMap{nb.matrix, nb.source_rank, rank}, xj,
                                             Cochain{nb.source_rank, h.at(nb.source_rank)}, nb.alpha, cfg.intra,
                                             nb.message_dim);
            acc = i == 0 ? y : merge_node(idj, idj, acc, y, cfg.inter);
        }
        const Eigen::Index dm = acc.dim();
        const Eigen::Index dh = xj.dim();
        const UpdateMap beta = cfg.beta;
        const RowMap split_beta = [beta, dm, dh](const RowVector& r) -> RowVector {
            return beta(r.tail(dh), r.head(dm));
        };
        Cochain merged = merge_node(idj, idj, acc, xj, Combine::Concat, split_beta);
        if (n == 0) merged.data.resize(0, h.at(rank).cols());
        out[rank] = std::move(merged.data);
    }
    return out;
}

RankCochains attention_homp_step(const CombinatorialComplex& cc, const RankCochains& h,
                                 const AttentionHompConfig& cfg) {
    const auto& nbs = cfg.base.neighborhoods;
    if (cfg.scores.size() != nbs.size() || cfg.b.size() != nbs.size())
        throw Error(ErrorCode::ShapeMismatch, "one score function and one weight per neighborhood");
    std::vector<double> b(cfg.b.size());
    for (const auto& [rank, ks] : by_target(cfg.base)) {
        std::vector<double> part;
        for (std::size_t k : ks) part.push_back(cfg.b[k]);
        part = project_to_simplex(part);
        for (std::size_t i = 0; i < ks.size(); ++i) b[ks[i]] = part[i];
    }
    return step(cc, h, cfg.base, &cfg.scores, &b);
}

std::vector<double> project_to_simplex(const std::vector<double>& v) {
    if (v.empty()) return v;
    std::vector<double> u = v;
    std::sort(u.begin(), u.end(), std::greater<>());
    double cum = 0, theta = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        cum += u[i];
        const double t = (cum - 1.0) / static_cast<double>(i + 1);
        if (u[i] - t > 0) theta = t;
    }
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i] - theta, 0.0);
    return out;
}

}  // namespace ccx
