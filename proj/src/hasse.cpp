#include "ccx/hasse.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace ccx {

namespace {

constexpr int kReadoutRank = -1;

void add_channel(HasseGraph& hg, const std::string& tag, const SparseMatrix& m, int src_rank,
                 const std::function<std::size_t(Eigen::Index)>& receiver) {
    auto& arcs = hg.channels[tag];
    for (int i = 0; i < m.outerSize(); ++i)
        for (SparseMatrix::InnerIterator it(m, i); it; ++it)
            if (it.value() != 0.0) arcs.push_back({hg.vertex(src_rank, it.col()), receiver(i), it.value()});
}

}  // namespace

bool HasseGraph::is_acyclic() const {
    std::vector<int> indeg(vertices.size(), 0);
    std::vector<std::vector<std::size_t>> out(vertices.size());
    for (auto [a, b] : edges) {
        out[a].push_back(b);
        ++indeg[b];
    }
    std::vector<std::size_t> stack;
    for (std::size_t v = 0; v < vertices.size(); ++v)
        if (indeg[v] == 0) stack.push_back(v);
    std::size_t seen = 0;
    while (!stack.empty()) {
        const auto v = stack.back();
        stack.pop_back();
        ++seen;
        for (auto w : out[v])
            if (--indeg[w] == 0) stack.push_back(w);
    }
    return seen == vertices.size();
}

std::string HasseGraph::to_dot(const CombinatorialComplex& cc) const {
    std::ostringstream os;
    os << "digraph hasse {\n  rankdir=BT;\n";
    for (std::size_t v = 0; v < vertices.size(); ++v) {
        const auto ref = vertices[v];
        const std::string label = ref.rank == kReadoutRank ? "readout" : cc.cell(ref).to_string();
        os << "  v" << v << " [label=\"" << label << "\", rank_tag=" << ref.rank << "];\n";
    }
    for (auto [a, b] : edges) os << "  v" << a << " -> v" << b << ";\n";
    for (const auto& e : augmented) {
        std::string tags;
        for (const auto& t : e.tags) tags += (tags.empty() ? "" : ",") + t;
        os << "  v" << e.a << " -> v" << e.b << " [dir=none, style=dashed, label=\"" << tags << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

HasseGraph hasse(const CombinatorialComplex& cc) {
    HasseGraph hg;
    for (int k = 0; k <= cc.dim(); ++k)
        for (std::size_t i = 0; i < cc.rank_size(k); ++i) {
            hg.index[CellRef{k, i}] = hg.vertices.size();
            hg.vertices.push_back(CellRef{k, i});
        }
    for (int k = 0; k < cc.dim(); ++k) {
        const SparseMatrix b = incidence(cc, k, k + 1).matrix;
        for (int i = 0; i < b.outerSize(); ++i)
            for (SparseMatrix::InnerIterator it(b, i); it; ++it)
                hg.edges.emplace_back(hg.vertex(k, i), hg.vertex(k + 1, it.col()));
    }
    std::sort(hg.edges.begin(), hg.edges.end());
    return hg;
}

HasseGraph augment_hasse(const CombinatorialComplex& cc, const std::vector<std::string>& selectors) {
    HasseGraph hg = hasse(cc);
    std::set<std::pair<std::size_t, std::size_t>> core;
    for (auto [a, b] : hg.edges) core.emplace(std::min(a, b), std::max(a, b));
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::string>> extra;
    for (const auto& text : selectors) {
        const Selector s = Selector::parse(text);
        if (s.type == Selector::Type::Mean) throw Error(ErrorCode::UnknownSelector, text + " does not link cells");
        const Operator op = resolve_selector(cc, s);
        const auto tag = s.canonical();
        add_channel(hg, tag, op.matrix, op.src_rank, [&](Eigen::Index i) { return hg.vertex(op.dst_rank, i); });
        for (const auto& arc : hg.channels[tag]) {
            if (arc.from == arc.to) continue;
            const auto key = std::make_pair(std::min(arc.from, arc.to), std::max(arc.from, arc.to));
            if (core.count(key)) continue;
            auto& tags = extra[key];
            if (std::find(tags.begin(), tags.end(), tag) == tags.end()) tags.push_back(tag);
        }
    }
    for (auto& [key, tags] : extra) hg.augmented.push_back({key.first, key.second, tags});
    return hg;
}

CochainMapById reduce_and_run(const TensorDiagram& d, const CombinatorialComplex& cc, const CochainMapById& inputs) {
    const auto& spec = d.spec();
    HasseGraph hg = hasse(cc);
    std::size_t readout = 0;
    if (std::any_of(spec.nodes.begin(), spec.nodes.end(), [](const NodeSpec& n) { return n.readout; })) {
        readout = hg.vertices.size();
        hg.index[CellRef{kReadoutRank, 0}] = readout;
        hg.vertices.push_back(CellRef{kReadoutRank, 0});
    }
    auto members = [&](const NodeSpec& n) {
        std::vector<std::size_t> vs;
        if (n.readout) return std::vector<std::size_t>{readout};
        for (std::size_t i = 0; i < cc.rank_size(n.rank); ++i) vs.push_back(hg.vertex(n.rank, i));
        return vs;
    };

    std::vector<std::string> tags(spec.edges.size());
    for (std::size_t e = 0; e < spec.edges.size(); ++e) {
        const Operator& op = d.edge_operator(e);
        const auto& dst = d.node(spec.edges[e].dst);
        const auto receivers = members(dst);
        if (op.matrix.cols() != static_cast<Eigen::Index>(cc.rank_size(op.src_rank)) ||
            op.matrix.rows() != static_cast<Eigen::Index>(receivers.size()))
            throw Error(ErrorCode::ShapeMismatch, "diagram operators were not built on this complex");
        tags[e] = "e" + std::to_string(e) + ":" + spec.edges[e].selector;
        add_channel(hg, tags[e], op.matrix, op.src_rank, [&](Eigen::Index i) { return receivers[i]; });
    }

    const auto nv = hg.vertices.size();
    std::vector<std::vector<RowVector>> feat(spec.nodes.size(), std::vector<RowVector>(nv));
    const auto& params = d.params();
    for (std::size_t node : d.topo_order()) {
        const auto& nd = spec.nodes[node];
        const auto vs = members(nd);
        if (d.in_edges(node).empty()) {
            auto it = inputs.find(nd.id);
            if (it == inputs.end()) throw Error(ErrorCode::MissingInput, "no cochain for node " + nd.id);
            if (it->second.rows() != static_cast<Eigen::Index>(vs.size()) || it->second.dim() != nd.dim)
                throw Error(ErrorCode::ShapeMismatch, "input for " + nd.id + " has the wrong shape");
            for (std::size_t i = 0; i < vs.size(); ++i) feat[node][vs[i]] = it->second.data.row(i);
            continue;
        }
        std::vector<std::vector<RowVector>> per_edge;
        for (std::size_t e : d.in_edges(node)) {
            const auto& edge = spec.edges[e];
            const auto src = d.node_index(edge.src);
            const auto& h = feat[src];
            const Eigen::Index w = d.edge_width(e);
            std::vector<RowVector> msg(nv, RowVector::Zero(w));
            std::vector<int> count(nv, 0);
            const auto& arcs = hg.channels.at(tags[e]);

            if (edge.kind == LayerKind::Plain) {
                for (const auto& arc : arcs) {
                    if (edge.agg == Aggregation::Max && count[arc.to] > 0)
                        msg[arc.to] = msg[arc.to].cwiseMax(h[arc.from]);
                    else if (edge.agg == Aggregation::Max)
                        msg[arc.to] = h[arc.from];
                    else
                        msg[arc.to] += h[arc.from];
                    ++count[arc.to];
                }
                if (edge.agg == Aggregation::Mean)
                    for (std::size_t v = 0; v < nv; ++v)
                        if (count[v] > 0) msg[v] /= count[v];
            } else {
                const Matrix& W = params.value(d.slot(e, "W"));
                std::vector<RowVector> p(nv);
                for (const auto& arc : arcs)
                    if (p[arc.from].size() == 0) p[arc.from] = h[arc.from] * W;
                if (edge.kind == LayerKind::Conv) {
                    for (const auto& arc : arcs) msg[arc.to] += arc.weight * p[arc.from];
                } else {
                    const Matrix& a = params.value(d.slot(e, "a"));
                    const bool cross = !edge.query.empty() && (d.edge_operator(e).to_readout ||
                                                               d.edge_operator(e).src_rank != d.edge_operator(e).dst_rank);
                    const Eigen::Index wq = cross ? params.value(d.slot(e, "Wq")).cols() : w;
                    const RowVector a1 = a.topRows(w).transpose();
                    const RowVector a2 = a.bottomRows(wq).transpose();
                    // Receiver score: own projection for same rank, query projection across ranks.
                    std::vector<double> recv(nv, 0.0);
                    std::vector<bool> has_recv(nv, false);
                    const auto& qfeat = cross ? feat[d.node_index(edge.query)] : h;
                    const Matrix* wq_mat = cross ? &params.value(d.slot(e, "Wq")) : &W;
                    for (const auto& arc : arcs) {
                        if (has_recv[arc.to]) continue;
                        const RowVector q = qfeat[arc.to] * *wq_mat;
                        recv[arc.to] = cross ? q.dot(a2) : q.dot(a1);
                        has_recv[arc.to] = true;
                    }
                    std::size_t lo = 0;
                    while (lo < arcs.size()) {
                        std::size_t hi = lo;
                        while (hi < arcs.size() && arcs[hi].to == arcs[lo].to) ++hi;
                        std::vector<double> s(hi - lo);
                        double mx = -INFINITY;
                        for (std::size_t k = lo; k < hi; ++k) {
                            const double send = cross ? p[arcs[k].from].dot(a1) : p[arcs[k].from].dot(a2);
                            s[k - lo] = activate(edge.score, recv[arcs[k].to] + send);
                            mx = std::max(mx, s[k - lo]);
                        }
                        double z = 0;
                        for (double& v : s) z += (v = std::exp(v - mx));
                        for (std::size_t k = lo; k < hi; ++k)
                            msg[arcs[k].to] += arcs[k].weight * (s[k - lo] / z) * p[arcs[k].from];
                        lo = hi;
                    }
                }
            }
            for (std::size_t v : vs) msg[v] = msg[v].unaryExpr([&](double x) { return activate(edge.activation, x); });
            per_edge.push_back(std::move(msg));
        }
        for (std::size_t v : vs) {
            RowVector m;
            if (nd.combine == Combine::Sum) {
                m = per_edge[0][v];
                for (std::size_t k = 1; k < per_edge.size(); ++k) m += per_edge[k][v];
            } else {
                Eigen::Index total = 0;
                for (const auto& pe : per_edge) total += pe[v].size();
                m.resize(total);
                Eigen::Index c = 0;
                for (const auto& pe : per_edge) {
                    m.segment(c, pe[v].size()) = pe[v];
                    c += pe[v].size();
                }
            }
            feat[node][v] = m.unaryExpr([&](double x) { return activate(nd.activation, x); });
        }
    }

    CochainMapById out;
    for (const auto& id : d.targets()) {
        const auto& nd = d.node(id);
        const auto vs = members(nd);
        Matrix m(static_cast<Eigen::Index>(vs.size()), nd.dim);
        for (std::size_t i = 0; i < vs.size(); ++i) m.row(i) = feat[d.node_index(id)][vs[i]];
        out[id] = Cochain{nd.rank, m};
    }
    return out;
}

std::string structure_fingerprint(const CombinatorialComplex& cc) {
    std::ostringstream os;
    os << "v" << cc.vertex_count() << "|sizes";
    for (int k = 0; k <= cc.dim(); ++k) os << ' ' << cc.rank_size(k);
    auto dump = [&](int r, int k) {
        const SparseMatrix b = incidence(cc, r, k).matrix;
        os << "|B" << r << ',' << k << ':';
        for (int i = 0; i < b.outerSize(); ++i)
            for (SparseMatrix::InnerIterator it(b, i); it; ++it) os << '(' << i << ',' << it.col() << ')';
    };
    for (int k = 0; k < cc.dim(); ++k) dump(k, k + 1);
    for (int k = 2; k <= cc.dim(); ++k) dump(0, k);
    return os.str();
}

Relabelled relabel_vertices(const CombinatorialComplex& cc, const std::vector<Vertex>& sigma) {
    const auto n = cc.vertex_count();
    std::vector<bool> hit(n, false);
    if (sigma.size() != n) throw Error(ErrorCode::BadParams, "relabelling needs one image per vertex");
    for (Vertex v : sigma) {
        if (v >= n || hit[v]) throw Error(ErrorCode::BadParams, "relabelling is not a permutation");
        hit[v] = true;
    }
    auto image = [&](const CellSet& c) {
        std::vector<Vertex> vs;
        for (Vertex v : c.vertices()) vs.push_back(sigma[v]);
        return CellSet(std::move(vs));
    };
    std::vector<RankedCell> cells;
    for (int k = 1; k <= cc.dim(); ++k)
        for (const auto& c : cc.cells(k)) cells.push_back({image(c), k});
    Relabelled out{build_cc(n, cells), {}};
    for (int k = 0; k <= cc.dim(); ++k) {
        CellTransform t = CellTransform::identity(cc.rank_size(k));
        for (std::size_t i = 0; i < cc.rank_size(k); ++i)
            t.perm[out.cc.find(image(cc.cells(k)[i]))->index] = i;
        out.transform[k] = std::move(t);
    }
    return out;
}

WeightedGraph representation_graph(const CombinatorialComplex& cc, int k,
                                   const std::function<double(std::size_t, std::size_t)>& sim) {
    const auto n = cc.rank_size(k);
    std::vector<std::pair<Vertex, Vertex>> edges;
    std::vector<double> weights;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double w = sim(i, j);
            if (w != 0.0) {
                edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(j));
                weights.push_back(w);
            }
        }
    return {Graph{n, std::move(edges)}, std::move(weights)};
}

WeightedGraph representation_graph(const CombinatorialComplex& cc, int k, const SparseMatrix& sim) {
    const auto n = static_cast<Eigen::Index>(cc.rank_size(k));
    if (sim.rows() != n || sim.cols() != n) throw Error(ErrorCode::ShapeMismatch, "similarity matrix shape");
    std::vector<std::pair<Vertex, Vertex>> edges;
    std::vector<double> weights;
    for (int i = 0; i < sim.outerSize(); ++i)
        for (SparseMatrix::InnerIterator it(sim, i); it; ++it)
            if (it.col() > i && it.value() != 0.0) {
                edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(it.col()));
                weights.push_back(it.value());
            }
    return {Graph{static_cast<std::size_t>(n), std::move(edges)}, std::move(weights)};
}

}  // namespace ccx
