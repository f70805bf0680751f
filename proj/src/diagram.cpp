#include "ccx/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <regex>
#include <set>

namespace ccx {

namespace {

[[noreturn]] void bad_spec(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

Aggregation parse_aggregation(const std::string& s) {
    if (s == "sum") return Aggregation::Sum;
    if (s == "mean") return Aggregation::Mean;
    if (s == "max") return Aggregation::Max;
    bad_spec("unknown aggregation '" + s + "'");
}

const char* aggregation_name(Aggregation a) {
    switch (a) {
        case Aggregation::Sum: return "sum";
        case Aggregation::Mean: return "mean";
        case Aggregation::Max: return "max";
    }
    return "sum";
}

LayerKind parse_kind(const std::string& s) {
    if (s == "conv") return LayerKind::Conv;
    if (s == "attention") return LayerKind::Attention;
    if (s == "plain") return LayerKind::Plain;
    bad_spec("unknown layer kind '" + s + "'");
}

const char* kind_name(LayerKind k) {
    switch (k) {
        case LayerKind::Conv: return "conv";
        case LayerKind::Attention: return "attention";
        case LayerKind::Plain: return "plain";
    }
    return "conv";
}

Combine parse_combine(const std::string& s) {
    if (s == "sum") return Combine::Sum;
    if (s == "concat") return Combine::Concat;
    bad_spec("unknown combine '" + s + "'");
}

bool cross_rank(const EdgeSpec& e, const Operator& op) {
    return e.kind == LayerKind::Attention && (op.to_readout || op.src_rank != op.dst_rank);
}

}  // namespace

Selector Selector::parse(const std::string& text) {
    std::string s;
    for (char c : text)
        if (c != '_' && c != '{' && c != '}' && c != ' ') s += c;
    static const std::regex re(R"(^(coA|sB|Mean|Id|B|A)(\d+)(?:,(\d+))?(\^T)?(:norm)?$)");
    std::smatch m;
    if (!std::regex_match(s, m, re)) throw Error(ErrorCode::UnknownSelector, "'" + text + "'");
    Selector sel;
    const std::string head = m[1];
    const bool two = m[3].matched;
    sel.r = std::stoi(m[2]);
    sel.k = two ? std::stoi(m[3]) : sel.r;
    sel.transpose = m[4].matched;
    sel.normalized = m[5].matched;
    const bool needs_two = head == "B" || head == "A" || head == "coA";
    if (needs_two != two || (sel.transpose && head != "B" && head != "sB"))
        throw Error(ErrorCode::UnknownSelector, "'" + text + "'");
    if (head == "B") sel.type = Type::Incidence;
    else if (head == "A") sel.type = Type::Adjacency;
    else if (head == "coA") sel.type = Type::Coadjacency;
    else if (head == "sB") sel.type = Type::Signed;
    else if (head == "Id") sel.type = Type::Identity;
    else sel.type = Type::Mean;
    return sel;
}

std::string Selector::canonical() const {
    std::string out;
    auto pair = "_{" + std::to_string(r) + "," + std::to_string(k) + "}";
    auto one = "_{" + std::to_string(r) + "}";
    switch (type) {
        case Type::Incidence: out = "B" + pair; break;
        case Type::Adjacency: out = "A" + pair; break;
        case Type::Coadjacency: out = "coA" + pair; break;
        case Type::Signed: out = "sB" + one; break;
        case Type::Identity: out = "Id" + one; break;
        case Type::Mean: out = "Mean" + one; break;
    }
    if (transpose) out += "^T";
    if (normalized) out += ":norm";
    return out;
}

Operator resolve_selector(const CombinatorialComplex& cc, const Selector& s) {
    Operator op;
    switch (s.type) {
        case Selector::Type::Incidence:
            op = {incidence(cc, s.r, s.k).matrix, s.k, s.r};
            break;
        case Selector::Type::Adjacency:
            op = {adjacency(cc, s.r, s.k).matrix, s.r, s.r};
            break;
        case Selector::Type::Coadjacency:
            op = {coadjacency(cc, s.r, s.k).matrix, s.r, s.r};
            break;
        case Selector::Type::Signed:
            op = {signed_incidence(cc, s.r).matrix, s.r + 1, s.r};
            break;
        case Selector::Type::Identity:
            op = {identity(cc, s.r).matrix, s.r, s.r};
            break;
        case Selector::Type::Mean: {
            const auto n = static_cast<Eigen::Index>(cc.rank_size(s.r));
            SparseMatrix m(1, n);
            for (Eigen::Index j = 0; j < n; ++j) m.insert(0, j) = 1.0 / static_cast<double>(n);
            m.makeCompressed();
            op = {m, s.r, s.r, true};
            break;
        }
    }
    if (s.transpose) {
        op.matrix = SparseMatrix(op.matrix.transpose());
        std::swap(op.src_rank, op.dst_rank);
    }
    if (s.normalized) op.matrix = sym_normalize(op.matrix);
    op.matrix.makeCompressed();
    return op;
}

SparseMatrix CellTransform::matrix() const {
    SparseMatrix m(static_cast<Eigen::Index>(perm.size()), static_cast<Eigen::Index>(perm.size()));
    std::vector<Eigen::Triplet<double>> t;
    for (std::size_t i = 0; i < perm.size(); ++i)
        t.emplace_back(static_cast<int>(i), static_cast<int>(perm[i]), sign.empty() ? 1.0 : sign[i]);
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    return m;
}

Matrix CellTransform::apply(const Matrix& h) const {
    if (static_cast<std::size_t>(h.rows()) != perm.size())
        throw Error(ErrorCode::ShapeMismatch, "transform of a cochain with the wrong row count");
    Matrix out(h.rows(), h.cols());
    for (std::size_t i = 0; i < perm.size(); ++i) out.row(i) = (sign.empty() ? 1.0 : sign[i]) * h.row(perm[i]);
    return out;
}

CellTransform CellTransform::identity(std::size_t n) {
    CellTransform t;
    for (std::size_t i = 0; i < n; ++i) t.perm.push_back(i);
    t.sign.assign(n, 1.0);
    return t;
}

OperatorSet OperatorSet::transformed(const std::map<int, CellTransform>& t) const {
    OperatorSet out;
    out.cell_counts = cell_counts;
    for (const auto& [name, op] : ops) {
        auto side = [&](int rank, Eigen::Index n) {
            auto it = t.find(rank);
            return it == t.end() ? CellTransform::identity(static_cast<std::size_t>(n)).matrix() : it->second.matrix();
        };
        const SparseMatrix left = op.to_readout ? CellTransform::identity(1).matrix() : side(op.dst_rank, op.matrix.rows());
        const SparseMatrix right = side(op.src_rank, op.matrix.cols());
        Operator o = op;
        o.matrix = left * op.matrix * SparseMatrix(right.transpose());
        o.matrix.makeCompressed();
        out.ops[name] = std::move(o);
    }
    return out;
}

DiagramSpec DiagramSpec::from_json(const nlohmann::json& j) {
    try {
        DiagramSpec d;
        for (const auto& n : j.at("nodes")) {
            NodeSpec s;
            s.id = n.at("id").get<std::string>();
            s.rank = n.value("rank", 0);
            s.dim = n.value("dim", 1);
            s.readout = n.value("readout", false);
            s.combine = parse_combine(n.value("combine", std::string("sum")));
            s.activation = parse_activation(n.value("activation", std::string("identity")));
            if (s.dim < 1) bad_spec("node " + s.id + " needs a positive dim");
            d.nodes.push_back(std::move(s));
        }
        for (const auto& e : j.at("edges")) {
            EdgeSpec s;
            s.src = e.at("src").get<std::string>();
            s.dst = e.at("dst").get<std::string>();
            s.selector = e.at("selector").get<std::string>();
            s.kind = parse_kind(e.value("kind", std::string("conv")));
            s.activation = parse_activation(e.value("activation", std::string("identity")));
            s.agg = parse_aggregation(e.value("agg", std::string("sum")));
            s.score = parse_activation(e.value("score", std::string("leaky_relu")));
            s.query = e.value("query", std::string());
            s.out_dim = e.value("out_dim", -1);
            s.aux_dim = e.value("aux_dim", -1);
            d.edges.push_back(std::move(s));
        }
        if (j.contains("merges")) {
            for (const auto& m : j.at("merges")) {
                const auto id = m.at("node").get<std::string>();
                auto it = std::find_if(d.nodes.begin(), d.nodes.end(), [&](const NodeSpec& n) { return n.id == id; });
                if (it == d.nodes.end()) bad_spec("merge for unknown node " + id);
                if (m.contains("combine")) it->combine = parse_combine(m.at("combine").get<std::string>());
                if (m.contains("activation")) it->activation = parse_activation(m.at("activation").get<std::string>());
            }
        }
        return d;
    } catch (const nlohmann::json::exception& e) {
        bad_spec(std::string("diagram spec: ") + e.what());
    }
}

nlohmann::json DiagramSpec::to_json() const {
    nlohmann::json j;
    j["nodes"] = nlohmann::json::array();
    for (const auto& n : nodes) {
        nlohmann::json o{{"id", n.id}, {"rank", n.rank}, {"dim", n.dim},
                         {"combine", n.combine == Combine::Sum ? "sum" : "concat"},
                         {"activation", activation_name(n.activation)}};
        if (n.readout) o["readout"] = true;
        j["nodes"].push_back(o);
    }
    j["edges"] = nlohmann::json::array();
    for (const auto& e : edges) {
        nlohmann::json o{{"src", e.src}, {"dst", e.dst}, {"selector", e.selector}, {"kind", kind_name(e.kind)},
                         {"activation", activation_name(e.activation)}};
        if (e.kind == LayerKind::Plain) o["agg"] = aggregation_name(e.agg);
        if (e.kind == LayerKind::Attention) o["score"] = activation_name(e.score);
        if (!e.query.empty()) o["query"] = e.query;
        if (e.out_dim > 0) o["out_dim"] = e.out_dim;
        if (e.aux_dim > 0) o["aux_dim"] = e.aux_dim;
        j["edges"].push_back(o);
    }
    return j;
}

OperatorSet DiagramSpec::operators(const CombinatorialComplex& cc) const {
    OperatorSet set;
    for (int k = 0; k <= cc.dim(); ++k) set.cell_counts[k] = cc.rank_size(k);
    for (const auto& e : edges) {
        const Selector s = Selector::parse(e.selector);
        const auto key = s.canonical();
        if (!set.ops.count(key)) set.ops[key] = resolve_selector(cc, s);
    }
    return set;
}

std::size_t TensorDiagram::node_index(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw Error(ErrorCode::MissingInput, "no node '" + id + "'");
    return it->second;
}

int TensorDiagram::height() const {
    int h = 0;
    for (int l : level_) h = std::max(h, l);
    return h;
}

std::vector<std::string> TensorDiagram::sources() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < spec_.nodes.size(); ++i)
        if (in_[i].empty()) out.push_back(spec_.nodes[i].id);
    return out;
}

std::vector<std::string> TensorDiagram::targets() const {
    std::vector<bool> used(spec_.nodes.size(), false);
    for (std::size_t i = 0; i < spec_.nodes.size(); ++i)
        for (std::size_t d : deps_[i]) used[d] = true;
    std::vector<std::string> out;
    for (std::size_t i = 0; i < spec_.nodes.size(); ++i)
        if (!used[i]) out.push_back(spec_.nodes[i].id);
    return out;
}

const Operator& TensorDiagram::edge_operator(std::size_t e) const {
    return ops_.ops.at(Selector::parse(spec_.edges.at(e).selector).canonical());
}

Eigen::Index TensorDiagram::edge_width(std::size_t e) const {
    const auto& edge = spec_.edges.at(e);
    if (edge.kind == LayerKind::Plain) return node(edge.src).dim;
    return edge.out_dim > 0 ? edge.out_dim : node(edge.dst).dim;
}

std::string TensorDiagram::slot(std::size_t e, const std::string& name) const {
    return "e" + std::to_string(e) + "." + name;
}

Eigen::Index TensorDiagram::rows_of(const NodeSpec& n) const {
    if (n.readout) return 1;
    auto it = ops_.cell_counts.find(n.rank);
    return it == ops_.cell_counts.end() ? 0 : static_cast<Eigen::Index>(it->second);
}

TensorDiagram TensorDiagram::with_operators(OperatorSet ops) const {
    return compile_diagram(spec_, std::move(ops), params_, 0);
}

TensorDiagram compile_diagram(const DiagramSpec& spec, OperatorSet ops, std::shared_ptr<ParameterStore> params,
                              std::uint64_t seed) {
    TensorDiagram d;
    d.spec_ = spec;
    d.ops_ = std::move(ops);
    d.params_ = params ? std::move(params) : std::make_shared<ParameterStore>();
    const auto n = spec.nodes.size();
    for (std::size_t i = 0; i < n; ++i)
        if (!d.index_.emplace(spec.nodes[i].id, i).second) bad_spec("duplicate node id " + spec.nodes[i].id);
    d.in_.assign(n, {});
    d.deps_.assign(n, {});
    auto find = [&](const std::string& id) {
        auto it = d.index_.find(id);
        if (it == d.index_.end()) bad_spec("edge refers to unknown node '" + id + "'");
        return it->second;
    };
    for (std::size_t e = 0; e < spec.edges.size(); ++e) {
        const auto& edge = spec.edges[e];
        const auto s = find(edge.src), t = find(edge.dst);
        const auto key = Selector::parse(edge.selector).canonical();
        auto it = d.ops_.ops.find(key);
        if (it == d.ops_.ops.end()) throw Error(ErrorCode::UnknownSelector, key + " is not in the operator set");
        const Operator& op = it->second;
        const auto& src = spec.nodes[s];
        const auto& dst = spec.nodes[t];
        const std::string where = "edge " + edge.src + "->" + edge.dst + " (" + key + ")";
        if (src.readout || src.rank != op.src_rank)
            throw Error(ErrorCode::ShapeMismatch, where + " reads rank " + std::to_string(op.src_rank) +
                                                      " but source has rank " + std::to_string(src.rank));
        if (op.to_readout != dst.readout || (!op.to_readout && dst.rank != op.dst_rank))
            throw Error(ErrorCode::ShapeMismatch, where + " writes rank " + std::to_string(op.dst_rank) +
                                                      " but target has rank " + std::to_string(dst.rank));
        d.in_[t].push_back(e);
        d.deps_[t].push_back(s);
        if (cross_rank(edge, op)) {
            if (edge.query.empty()) bad_spec(where + " is cross-rank attention without a query node");
            const auto q = find(edge.query);
            if (spec.nodes[q].rank != dst.rank || spec.nodes[q].readout != dst.readout)
                throw Error(ErrorCode::ShapeMismatch, where + " query node has a different rank than the target");
            d.deps_[t].push_back(q);
        }
        if (edge.kind == LayerKind::Plain && edge.out_dim > 0 && edge.out_dim != src.dim)
            throw Error(ErrorCode::ShapeMismatch, where + " is plain and cannot change width");
    }

    // Kahn's algorithm, smallest index first for a stable order.
    std::vector<int> indeg(n, 0);
    std::vector<std::vector<std::size_t>> out(n);
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t s : d.deps_[t]) {
            ++indeg[t];
            out[s].push_back(t);
        }
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t i = 0; i < n; ++i)
        if (indeg[i] == 0) ready.push(i);
    d.level_.assign(n, 0);
    while (!ready.empty()) {
        const auto u = ready.top();
        ready.pop();
        d.order_.push_back(u);
        for (std::size_t v : out[u]) {
            d.level_[v] = std::max(d.level_[v], d.level_[u] + 1);
            if (--indeg[v] == 0) ready.push(v);
        }
    }
    if (d.order_.size() != n) throw Error(ErrorCode::CycleDetected, "tensor diagram has a directed cycle");

    for (std::size_t t = 0; t < n; ++t) {
        if (d.in_[t].empty()) continue;
        const auto& node = spec.nodes[t];
        Eigen::Index total = 0;
        for (std::size_t e : d.in_[t]) {
            const auto w = d.edge_width(e);
            if (node.combine == Combine::Sum && w != node.dim)
                throw Error(ErrorCode::ShapeMismatch, "edge into " + node.id + " has width " + std::to_string(w) +
                                                          ", node dim is " + std::to_string(node.dim));
            total += w;
        }
        if (node.combine == Combine::Concat && total != node.dim)
            throw Error(ErrorCode::ShapeMismatch, "concatenated width into " + node.id + " is " + std::to_string(total));
    }

    for (std::size_t e = 0; e < spec.edges.size(); ++e) {
        const auto& edge = spec.edges[e];
        if (edge.kind == LayerKind::Plain) continue;
        const Eigen::Index din = d.node(edge.src).dim;
        const Eigen::Index w = d.edge_width(e);
        d.params_->ensure(d.slot(e, "W"), din, w, seed);
        if (edge.kind != LayerKind::Attention) continue;
        if (cross_rank(edge, d.edge_operator(e))) {
            const Eigen::Index aux = edge.aux_dim > 0 ? edge.aux_dim : w;
            d.params_->ensure(d.slot(e, "Wq"), d.node(edge.query).dim, aux, seed);
            d.params_->ensure(d.slot(e, "a"), w + aux, 1, seed);
        } else {
            d.params_->ensure(d.slot(e, "a"), 2 * w, 1, seed);
        }
    }
    return d;
}

TensorDiagram compile_diagram(const DiagramSpec& spec, const CombinatorialComplex& cc,
                              std::shared_ptr<ParameterStore> params, std::uint64_t seed) {
    return compile_diagram(spec, spec.operators(cc), std::move(params), seed);
}

namespace {

using VarLookup = std::function<ad::Var(std::size_t node)>;

ad::Var eval_node(ad::Tape& t, const TensorDiagram& d, std::size_t node, const VarLookup& var_of) {
    const auto& spec = d.spec();
    const auto& nd = spec.nodes[node];
    std::vector<ad::Var> msgs;
    for (std::size_t e : d.in_edges(node)) {
        const auto& edge = spec.edges[e];
        const Operator& op = d.edge_operator(e);
        const ad::Var h = var_of(d.node_index(edge.src));
        ad::Var m;
        switch (edge.kind) {
            case LayerKind::Conv:
                m = ad::conv_push_forward(t, op.matrix, h, t.parameter(d.params(), d.slot(e, "W")));
                break;
            case LayerKind::Plain:
                m = ad::aggregate(t, op.matrix, h, edge.agg);
                break;
            case LayerKind::Attention:
                if (cross_rank(edge, op)) {
                    m = ad::attention_cross_rank(t, op.matrix, h, var_of(d.node_index(edge.query)),
                                                 t.parameter(d.params(), d.slot(e, "W")),
                                                 t.parameter(d.params(), d.slot(e, "Wq")),
                                                 t.parameter(d.params(), d.slot(e, "a")), edge.score)
                            .k_t;
                } else {
                    m = ad::attention_same_rank(t, op.matrix, h, t.parameter(d.params(), d.slot(e, "W")),
                                                t.parameter(d.params(), d.slot(e, "a")), edge.score)
                            .out;
                }
                break;
        }
        msgs.push_back(ad::activate(t, m, edge.activation));
    }
    const ad::Var merged = nd.combine == Combine::Sum ? ad::add_all(t, msgs) : ad::concat_cols(t, msgs);
    return ad::activate(t, merged, nd.activation);
}

ad::Var input_var(ad::Tape& t, const TensorDiagram& d, const NodeSpec& n, const CochainMapById& inputs) {
    auto it = inputs.find(n.id);
    if (it == inputs.end()) throw Error(ErrorCode::MissingInput, "no cochain for node " + n.id);
    const Cochain& c = it->second;
    if ((!n.readout && c.rank != n.rank) || c.rows() != d.rows_of(n) || c.dim() != n.dim)
        throw Error(ErrorCode::ShapeMismatch, "input for " + n.id + " is rank " + std::to_string(c.rank) + ", " +
                                                  std::to_string(c.rows()) + "x" + std::to_string(c.dim()));
    return t.constant(c.data);
}

}  // namespace

Evaluation evaluate(const TensorDiagram& d, const CochainMapById& inputs, Mode mode) {
    Evaluation ev;
    ev.tape = std::make_unique<ad::Tape>(mode == Mode::Train);
    auto& t = *ev.tape;
    const auto& nodes = d.spec().nodes;
    std::vector<ad::Var> vars(nodes.size());
    for (std::size_t i : d.topo_order()) {
        vars[i] = d.in_edges(i).empty() ? input_var(t, d, nodes[i], inputs)
                                        : eval_node(t, d, i, [&](std::size_t j) { return vars[j]; });
        ev.vars[nodes[i].id] = vars[i];
    }
    for (const auto& id : d.targets()) {
        const auto& n = d.node(id);
        ev.outputs[id] = Cochain{n.rank, t.value(ev.vars[id])};
    }
    return ev;
}

CochainMapById forward(const TensorDiagram& d, const CochainMapById& inputs, Mode mode) {
    return evaluate(d, inputs, mode).outputs;
}

void backward(Evaluation& ev, const std::map<std::string, Matrix>& loss_grads) {
    std::vector<std::pair<ad::Var, Matrix>> seeds;
    for (const auto& [id, g] : loss_grads) {
        auto it = ev.vars.find(id);
        if (it == ev.vars.end()) throw Error(ErrorCode::MissingInput, "no node " + id + " in the evaluation");
        seeds.emplace_back(it->second, g);
    }
    ev.tape->backward(seeds);
}

std::vector<std::vector<std::size_t>> diagram_layers(const TensorDiagram& d) {
    std::vector<std::vector<std::size_t>> layers(d.height());
    for (std::size_t e = 0; e < d.spec().edges.size(); ++e) {
        const int l = d.level(d.node_index(d.spec().edges[e].dst));
        layers[l - 1].push_back(e);
    }
    return layers;
}

CochainMapById forward_layer(const TensorDiagram& d, int level, const CochainMapById& available) {
    ad::Tape t(false);
    std::map<std::size_t, ad::Var> vars;
    auto var_of = [&](std::size_t j) {
        auto it = vars.find(j);
        if (it != vars.end()) return it->second;
        const auto& n = d.spec().nodes[j];
        auto a = available.find(n.id);
        if (a == available.end()) throw Error(ErrorCode::MissingInput, "layer input " + n.id + " not available");
        return vars[j] = t.constant(a->second.data);
    };
    CochainMapById out;
    for (std::size_t i : d.topo_order()) {
        if (d.level(i) != level || d.in_edges(i).empty()) continue;
        const auto& n = d.spec().nodes[i];
        out[n.id] = Cochain{n.rank, t.value(eval_node(t, d, i, var_of))};
    }
    return out;
}

DiagramClassification classify_diagram(const TensorDiagram& d) {
    DiagramClassification out;
    const auto& spec = d.spec();
    for (const auto& layer : diagram_layers(d)) {
        int imin = std::numeric_limits<int>::max(), jmin = std::numeric_limits<int>::max();
        std::vector<std::pair<int, int>> maps;
        for (std::size_t e : layer) {
            const auto& edge = spec.edges[e];
            const int i = d.node(edge.src).rank, j = d.node(edge.dst).rank;
            imin = std::min(imin, i);
            jmin = std::min(jmin, j);
            maps.emplace_back(i, j);
            if (!edge.query.empty()) imin = std::min(imin, d.node(edge.query).rank);
        }
        const bool reaches = std::any_of(maps.begin(), maps.end(),
                                         [&](auto m) { return m.first == imin && m.second >= jmin; });
        LayerClass c = LayerClass::Other;
        if (imin == jmin) c = LayerClass::LowestRankPreserving;
        else if (imin < jmin && reaches) c = LayerClass::Pooling;
        else if (imin > jmin && reaches) c = LayerClass::Unpooling;
        out.layers.push_back(c);
    }
    auto all_of = [&](LayerClass a) {
        return std::all_of(out.layers.begin(), out.layers.end(),
                           [&](LayerClass c) { return c == a || c == LayerClass::LowestRankPreserving; });
    };
    auto any_of = [&](LayerClass a) { return std::find(out.layers.begin(), out.layers.end(), a) != out.layers.end(); };
    if (all_of(LayerClass::Pooling) && any_of(LayerClass::Pooling)) out.kind = DiagramClass::Pooling;
    else if (all_of(LayerClass::Unpooling) && any_of(LayerClass::Unpooling)) out.kind = DiagramClass::Unpooling;
    return out;
}

const char* layer_class_name(LayerClass c) {
    switch (c) {
        case LayerClass::Pooling: return "pooling-1";
        case LayerClass::LowestRankPreserving: return "lowest-rank-preserving-1";
        case LayerClass::Unpooling: return "unpooling-1";
        case LayerClass::Other: return "other";
    }
    return "other";
}

const char* diagram_class_name(DiagramClass c) {
    switch (c) {
        case DiagramClass::Pooling: return "pooling CCNN";
        case DiagramClass::Unpooling: return "unpooling CCNN";
        case DiagramClass::Neither: return "neither";
    }
    return "neither";
}

LossValue compute_loss(LossKind kind, const Matrix& output, const Target& target) {
    LossValue lv;
    lv.grad = Matrix::Zero(output.rows(), output.cols());
    if (kind == LossKind::Mse) {
        if (target.values.rows() != output.rows() || target.values.cols() != output.cols())
            throw Error(ErrorCode::ShapeMismatch, "mse target shape differs from the output");
        const Matrix diff = output - target.values;
        const double n = std::max<double>(1.0, static_cast<double>(diff.size()));
        lv.loss = diff.squaredNorm() / n;
        lv.grad = 2.0 * diff / n;
        return lv;
    }
    if (static_cast<Eigen::Index>(target.labels.size()) != output.rows())
        throw Error(ErrorCode::ShapeMismatch, "one label per output row is required");
    for (std::size_t i = 0; i < target.labels.size(); ++i)
        if (target.labels[i] >= 0) ++lv.counted;
    if (lv.counted == 0) return lv;
    for (Eigen::Index i = 0; i < output.rows(); ++i) {
        const int y = target.labels[i];
        if (y < 0) continue;
        if (y >= output.cols()) throw Error(ErrorCode::ShapeMismatch, "label beyond the number of classes");
        const auto row = output.row(i);
        const double m = row.maxCoeff();
        const Eigen::RowVectorXd ex = (row.array() - m).exp();
        const double s = ex.sum();
        lv.loss += -(row(y) - m - std::log(s)) / lv.counted;
        lv.grad.row(i) = ex / s / lv.counted;
        lv.grad(i, y) -= 1.0 / lv.counted;
        Eigen::Index arg;
        row.maxCoeff(&arg);
        lv.correct += arg == y;
    }
    return lv;
}

TrainConfig TrainConfig::from_json(const nlohmann::json& j) {
    try {
        TrainConfig c;
        c.lr = j.value("lr", c.lr);
        c.epochs = j.value("epochs", c.epochs);
        c.seed = j.value("seed", c.seed);
        c.output = j.value("output", c.output);
        c.reinitialize = j.value("reinitialize", c.reinitialize);
        const auto loss = j.value("loss", std::string("cross-entropy"));
        if (loss == "cross-entropy" || loss == "cross_entropy") c.loss = LossKind::CrossEntropy;
        else if (loss == "mse") c.loss = LossKind::Mse;
        else bad_spec("unknown loss '" + loss + "'");
        if (c.epochs < 0 || !(c.lr >= 0)) bad_spec("epochs and lr must be non-negative");
        return c;
    } catch (const nlohmann::json::exception& e) {
        bad_spec(std::string("training config: ") + e.what());
    }
}

namespace {

ParameterStore& shared_store(const std::vector<Example>& data) {
    if (data.empty()) throw Error(ErrorCode::BadParams, "empty dataset");
    ParameterStore& p = data.front().diagram->params();
    for (const auto& ex : data)
        if (&ex.diagram->params() != &p) throw Error(ErrorCode::BadParams, "examples use different parameter stores");
    return p;
}

}  // namespace

History train(const std::vector<Example>& data, const TrainConfig& cfg) {
    ParameterStore& params = shared_store(data);
    if (cfg.reinitialize) params.reinitialize(cfg.seed);
    History h;
    const double n = static_cast<double>(data.size());
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        params.zero_grad();
        double loss = 0;
        int correct = 0, counted = 0;
        for (const auto& ex : data) {
            Evaluation ev = evaluate(*ex.diagram, ex.inputs, Mode::Train);
            const LossValue lv = compute_loss(cfg.loss, ev.outputs.at(cfg.output).data, ex.target);
            backward(ev, {{cfg.output, lv.grad / n}});
            loss += lv.loss / n;
            correct += lv.correct;
            counted += lv.counted;
        }
        h.loss.push_back(loss);
        h.accuracy.push_back(cfg.loss == LossKind::CrossEntropy && counted > 0
                                 ? static_cast<double>(correct) / counted
                                 : std::numeric_limits<double>::quiet_NaN());
        params.step(cfg.lr);
    }
    return h;
}

LossValue evaluate_dataset(const std::vector<Example>& data, LossKind loss, const std::string& output) {
    LossValue total;
    for (const auto& ex : data) {
        const auto out = forward(*ex.diagram, ex.inputs, Mode::Infer);
        const LossValue lv = compute_loss(loss, out.at(output).data, ex.target);
        total.loss += lv.loss / static_cast<double>(data.size());
        total.correct += lv.correct;
        total.counted += lv.counted;
    }
    return total;
}

}  // namespace ccx
