#include "ccx/datasets.hpp"

#include <random>

#include "ccx/lifting.hpp"

namespace ccx {

std::vector<LabelledComplex> synthetic_cycles(int per_class, std::uint64_t seed, int n_min, int n_max, double noise) {
    if (per_class < 0 || n_min < 5 || n_max < n_min) throw Error(ErrorCode::BadParams, "bad synthetic set sizes");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> size(n_min, n_max);
    std::normal_distribution<double> jitter(0.0, noise);
    std::vector<LabelledComplex> out;
    for (int i = 0; i < 2 * per_class; ++i) {
        const int label = i % 2;
        const int n = size(rng);
        std::vector<std::pair<Vertex, Vertex>> edges;
        std::vector<Vertex> cycle;
        for (int v = 0; v < n; ++v) {
            cycle.push_back(static_cast<Vertex>(v));
            edges.emplace_back(v, (v + 1) % n);
            if (label == 1) edges.emplace_back(v, (v + 2) % n);
        }
        LabelledComplex lc;
        lc.label = label;
        lc.graph = make_graph(static_cast<std::size_t>(n), edges);
        lc.cc = label == 0 ? loop_cc(lc.graph, {cycle}) : loop_cc(lc.graph, all_triangles(lc.graph));

        const auto adj = lc.graph.adjacency_lists();
        Matrix x0(n, 2);
        for (int v = 0; v < n; ++v) {
            x0(v, 0) = 1.0 + jitter(rng);
            x0(v, 1) = static_cast<double>(adj[v].size()) / 4.0 + jitter(rng);
        }
        lc.inputs["x0"] = Cochain{0, x0};
        for (int k = 1; k <= 2; ++k) {
            const auto& cells = lc.cc.cells(k);
            Matrix xk(static_cast<Eigen::Index>(cells.size()), 2);
            for (std::size_t c = 0; c < cells.size(); ++c) {
                xk.row(c) = x0.row(cells[c].front());
                for (auto v : cells[c].vertices()) xk.row(c) = xk.row(c).cwiseMax(x0.row(v));
            }
            lc.inputs["x" + std::to_string(k)] = Cochain{k, xk};
        }
        out.push_back(std::move(lc));
    }
    return out;
}

DiagramSpec cycle_classifier_spec(int hidden) {
    DiagramSpec s;
    for (int k = 0; k <= 2; ++k) s.nodes.push_back({"x" + std::to_string(k), k, 2});
    for (int k = 0; k <= 2; ++k) s.nodes.push_back({"h" + std::to_string(k), k, hidden, false, Combine::Sum, Activation::Tanh});
    s.nodes.push_back({"out", 3, 2, true});
    auto conv = [&](const std::string& src, const std::string& dst, const std::string& sel) {
        EdgeSpec e;
        e.src = src;
        e.dst = dst;
        e.selector = sel;
        s.edges.push_back(e);
    };
    conv("x0", "h0", "A_{0,1}:norm");
    conv("x1", "h0", "B_{0,1}:norm");
    conv("x0", "h1", "B_{0,1}^T:norm");
    conv("x2", "h1", "B_{1,2}:norm");
    conv("x0", "h2", "B_{0,2}^T:norm");
    conv("x1", "h2", "B_{1,2}^T:norm");
    for (int k = 0; k <= 2; ++k) conv("h" + std::to_string(k), "out", "Mean_{" + std::to_string(k) + "}");
    return s;
}

std::vector<Example> make_examples(const std::vector<LabelledComplex>& data, const DiagramSpec& spec,
                                   std::shared_ptr<ParameterStore> params, std::uint64_t seed) {
    if (!params) params = std::make_shared<ParameterStore>();
    std::vector<Example> out;
    for (const auto& lc : data) {
        Example ex;
        ex.diagram = std::make_shared<const TensorDiagram>(compile_diagram(spec, lc.cc, params, seed));
        ex.inputs = lc.inputs;
        ex.target.labels = {lc.label};
        out.push_back(std::move(ex));
    }
    return out;
}

}  // namespace ccx
