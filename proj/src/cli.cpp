#include "ccx/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "ccx/datasets.hpp"
#include "ccx/hasse.hpp"
#include "ccx/io.hpp"
#include "ccx/lifting.hpp"
#include "ccx/mog.hpp"

namespace ccx {

namespace {

// Parses "0 1 2; 2 3 4" into vertex lists.
std::vector<std::vector<Vertex>> parse_cell_lists(const std::string& text) {
    std::vector<std::vector<Vertex>> out;
    std::stringstream all(text);
    std::string group;
    while (std::getline(all, group, ';')) {
        std::istringstream ss(group);
        std::vector<Vertex> vs;
        long long v = 0;
        while (ss >> v) {
            if (v < 0) throw Error(ErrorCode::ParseError, "negative vertex in '" + group + "'");
            vs.push_back(static_cast<Vertex>(v));
        }
        if (!ss.eof()) throw Error(ErrorCode::ParseError, "bad vertex list '" + group + "'");
        if (!vs.empty()) out.push_back(std::move(vs));
    }
    return out;
}

std::vector<double> read_scalars(const std::string& path) {
    std::istringstream in(read_file(path));
    std::vector<double> out;
    std::string line;
    while (std::getline(in, line)) {
        if (auto p = line.find('#'); p != std::string::npos) line.erase(p);
        std::istringstream ss(line);
        double x = 0;
        while (ss >> x) out.push_back(x);
        if (!ss.eof()) throw Error(ErrorCode::ParseError, path + ": bad number in '" + line + "'");
    }
    return out;
}

Graph graph_of(const CombinatorialComplex& cc) {
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (int k = 1; k <= cc.dim(); ++k)
        for (const auto& c : cc.cells(k))
            if (c.size() == 2) edges.emplace_back(c.front(), c.back());
    return make_graph(cc.vertex_count(), std::move(edges));
}

// Writes to the file when a path is given, else to out.
template <typename F>
void emit(const std::string& path, std::ostream& out, F&& write) {
    if (path.empty()) {
        write(out);
        return;
    }
    std::ofstream f(path);
    if (!f) throw Error(ErrorCode::ParseError, "cannot write " + path);
    write(f);
}

nlohmann::json load_json(const std::string& path) {
    const auto text = read_file(path);
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
}

Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = u(rng);
    return m;
}

struct LiftArgs {
    std::string method, input, cells, out;
    int n = 2, height = 3, width = 3, window = 2, stride = 1;
};

void run_lift(const LiftArgs& a, std::ostream& out) {
    CombinatorialComplex cc;
    auto need_input = [&] {
        if (a.input.empty()) throw Error(ErrorCode::MissingInput, "--input is required for " + a.method);
    };
    if (a.method == "lattice") {
        cc = lattice_cc(a.height, a.width, a.window, a.stride);
    } else if (a.method == "mesh") {
        need_input();
        cc = mesh_to_cc(load_off(a.input));
    } else if (a.method == "coface") {
        need_input();
        cc = coface_cc(load_cc(a.input));
    } else {
        need_input();
        const Graph g = load_edge_list(a.input);
        if (a.method == "graph") cc = graph_cc(g);
        else if (a.method == "nhop") cc = n_hop_cc(g, a.n);
        else if (a.method == "paths") cc = path_cc(g, parse_cell_lists(a.cells));
        else if (a.method == "loops") cc = loop_cc(g, a.cells.empty() ? all_triangles(g) : parse_cell_lists(a.cells));
        else throw Error(ErrorCode::BadParams, "unknown lift method " + a.method);
    }
    emit(a.out, out, [&](std::ostream& os) { write_cc(os, cc); });
}

struct MatricesArgs {
    std::string cc, out;
    std::vector<std::string> which;
    bool normalize = false;
};

void run_matrices(const MatricesArgs& a, std::ostream& out) {
    const CombinatorialComplex cc = load_cc(a.cc);
    emit(a.out, out, [&](std::ostream& os) {
        for (const auto& w : a.which) {
            SparseMatrix m;
            if (w == "L1") {
                m = hodge_laplacian_1(cc).sparseView();
                if (a.normalize) m = sym_normalize(m);
            } else {
                Selector s = Selector::parse(w);
                s.normalized = s.normalized || a.normalize;
                m = resolve_selector(cc, s).matrix;
            }
            if (a.which.size() > 1) os << "# " << w << '\n';
            write_triplets(os, m);
        }
    });
}

struct PoolArgs {
    bool mog = false;
    std::string graph, cc, scalar = "agd", features, out_cc, pooled, agg = "sum";
    int intervals = 2;
    double overlap = 0.3;
};

void run_pool(const PoolArgs& a, std::ostream& out) {
    if (!a.mog) throw Error(ErrorCode::BadParams, "pool needs --mog");
    if (a.graph.empty() == a.cc.empty()) throw Error(ErrorCode::MissingInput, "give exactly one of --graph, --cc");
    const Graph g = a.graph.empty() ? graph_of(load_cc(a.cc)) : load_edge_list(a.graph);
    std::vector<double> f = a.scalar == "agd" ? agd(g) : read_scalars(a.scalar);
    if (f.size() != g.vertex_count)
        throw Error(ErrorCode::ShapeMismatch, "scalar has " + std::to_string(f.size()) + " values for " +
                                                  std::to_string(g.vertex_count) + " vertices");
    f = normalize_scalar(f);
    const MogCover cover = make_cover(a.intervals, a.overlap);
    const MogResult r = mog(g, f, cover);
    out << "components " << r.components.size() << '\n';
    out << "mog_edges " << r.mog_edges.size() << '\n';
    out << "skipped " << r.skipped.size() << '\n';
    for (std::size_t i = 0; i < r.components.size(); ++i)
        out << "component " << i << " interval " << r.components[i].interval << ' '
            << r.components[i].vertices.to_string() << '\n';
    for (auto [i, j] : r.mog_edges) out << "edge " << i << ' ' << j << '\n';
    if (!a.out_cc.empty()) emit(a.out_cc == "-" ? std::string() : a.out_cc, out, [&](std::ostream& os) { write_cc(os, r.augmented_cc); });
    if (!a.pooled.empty()) {
        Cochain h0{0, Matrix::Identity(static_cast<Eigen::Index>(g.vertex_count), static_cast<Eigen::Index>(g.vertex_count))};
        if (!a.features.empty()) {
            std::istringstream in(read_file(a.features));
            h0 = read_cochain(in);
        }
        Aggregation agg = Aggregation::Sum;
        if (a.agg == "mean") agg = Aggregation::Mean;
        else if (a.agg == "max") agg = Aggregation::Max;
        else if (a.agg != "sum") throw Error(ErrorCode::BadParams, "unknown aggregation " + a.agg);
        const Cochain pooled = mog_pool(g, h0, f, cover, agg);
        emit(a.pooled == "-" ? std::string() : a.pooled, out, [&](std::ostream& os) { write_cochain(os, pooled); });
    }
}

int run_train(const std::string& config, std::ostream& out) {
    const auto j = load_json(config);
    TrainConfig cfg;
    DiagramSpec spec = cycle_classifier_spec();
    int per_class = 15, holdout = 10;
    std::uint64_t data_seed = 1;
    try {
        if (j.contains("train")) cfg = TrainConfig::from_json(j.at("train"));
        if (j.contains("diagram")) {
            const auto& dj = j.at("diagram");
            spec = DiagramSpec::from_json(dj.is_string() ? load_json(dj.get<std::string>()) : dj);
        }
        if (j.contains("dataset")) {
            const auto& syn = j.at("dataset").at("synthetic");
            per_class = syn.value("per_class", per_class);
            holdout = syn.value("holdout_per_class", holdout);
            data_seed = syn.value("seed", data_seed);
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, config + ": " + e.what());
    }
    if (cfg.output.empty()) cfg.output = "out";
    auto params = std::make_shared<ParameterStore>();
    const auto train_set = make_examples(synthetic_cycles(per_class, data_seed), spec, params, cfg.seed);
    const auto test_set = make_examples(synthetic_cycles(holdout, data_seed + 7919), spec, params, cfg.seed);
    const History h = train(train_set, cfg);
    for (std::size_t e = 0; e < h.loss.size(); ++e)
        out << "epoch " << e << " loss " << h.loss[e] << " accuracy " << h.accuracy[e] << '\n';
    const auto tr = evaluate_dataset(train_set, cfg.loss, cfg.output);
    const auto te = evaluate_dataset(test_set, cfg.loss, cfg.output);
    auto acc = [](const LossValue& v) { return v.counted ? static_cast<double>(v.correct) / v.counted : 0.0; };
    out << "train loss " << tr.loss << " accuracy " << acc(tr) << '\n';
    out << "heldout loss " << te.loss << " accuracy " << acc(te) << '\n';
    return 0;
}

struct HasseArgs {
    std::string cc, diagram, dot;
    std::uint64_t seed = 0;
};

int run_reduce_hasse(const HasseArgs& a, std::ostream& out, std::ostream& err) {
    const CombinatorialComplex cc = load_cc(a.cc);
    const DiagramSpec spec = DiagramSpec::from_json(load_json(a.diagram));
    const TensorDiagram d = compile_diagram(spec, cc, nullptr, a.seed);
    std::mt19937_64 rng(a.seed);
    CochainMapById inputs;
    for (const auto& id : d.sources()) {
        const auto& n = d.node(id);
        inputs[id] = Cochain{n.rank, random_matrix(rng, d.rows_of(n), n.dim)};
    }
    const auto direct = forward(d, inputs);
    const auto reduced = reduce_and_run(d, cc, inputs);
    double dev = 0;
    for (const auto& [id, c] : direct) dev = std::max(dev, (c.data - reduced.at(id).data).cwiseAbs().maxCoeff());
    out << "max_deviation " << dev << '\n';
    if (!a.dot.empty()) {
        std::vector<std::string> sels;
        for (const auto& e : spec.edges)
            if (Selector::parse(e.selector).type != Selector::Type::Mean) sels.push_back(e.selector);
        const HasseGraph hg = augment_hasse(cc, sels);
        emit(a.dot, out, [&](std::ostream& os) { os << hg.to_dot(cc); });
    }
    if (dev > 1e-12) {
        err << "reduce-hasse: reduced run deviates from the direct evaluation\n";
        return 1;
    }
    return 0;
}

void run_features(const std::string& mesh, const std::string& out_path, std::ostream& out) {
    const MeshFeatures f = mesh_features(load_off(mesh));
    emit(out_path, out, [&](std::ostream& os) {
        write_cochain(os, f.vertex);
        write_cochain(os, f.edge);
        write_cochain(os, f.face);
    });
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Combinatorial complex toolkit", "ccx"};
    app.require_subcommand(1);

    LiftArgs lift;
    auto* lift_cmd = app.add_subcommand("lift", "Lift a graph, complex, mesh or lattice to a complex");
    lift_cmd->add_option("--method", lift.method, "nhop|paths|loops|coface|lattice|mesh|graph")
        ->required()
        ->check(CLI::IsMember({"nhop", "paths", "loops", "coface", "lattice", "mesh", "graph"}));
    lift_cmd->add_option("--input", lift.input, "edge list, complex or OFF file");
    lift_cmd->add_option("--cells", lift.cells, "vertex lists for paths/loops, ';' separated");
    lift_cmd->add_option("--n", lift.n, "hop radius for nhop");
    lift_cmd->add_option("--height", lift.height);
    lift_cmd->add_option("--width", lift.width);
    lift_cmd->add_option("--window", lift.window);
    lift_cmd->add_option("--stride", lift.stride);
    lift_cmd->add_option("--out", lift.out, "output complex file (default stdout)");

    MatricesArgs mats;
    auto* mat_cmd = app.add_subcommand("matrices", "Export neighborhood matrices as sparse triplets");
    mat_cmd->add_option("--cc", mats.cc, "complex file")->required();
    mat_cmd->add_option("--which", mats.which, "selectors such as B0,1 A0,1 coA2,1 sB1 or L1")
        ->required()
        ->delimiter(' ');
    mat_cmd->add_flag("--normalize", mats.normalize, "symmetric normalization");
    mat_cmd->add_option("--out", mats.out);

    PoolArgs pool;
    auto* pool_cmd = app.add_subcommand("pool", "Mapper-on-graph pooling");
    pool_cmd->add_flag("--mog", pool.mog)->required();
    pool_cmd->add_option("--graph", pool.graph, "edge list");
    pool_cmd->add_option("--cc", pool.cc, "complex whose 1-cells give the graph");
    pool_cmd->add_option("--scalar", pool.scalar, "agd or a file with one value per vertex");
    pool_cmd->add_option("--intervals", pool.intervals);
    pool_cmd->add_option("--overlap", pool.overlap);
    pool_cmd->add_option("--features", pool.features, "vertex cochain file (default one-hot)");
    pool_cmd->add_option("--agg", pool.agg, "sum|mean|max");
    pool_cmd->add_option("--out-cc", pool.out_cc, "write the augmented complex");
    pool_cmd->add_option("--pooled", pool.pooled, "write the pooled 2-cochain ('-' for stdout)");

    std::string config;
    auto* train_cmd = app.add_subcommand("train", "Train a diagram on the synthetic cycle task");
    train_cmd->add_option("--config", config, "JSON run config")->required();

    HasseArgs hasse_args;
    auto* hasse_cmd = app.add_subcommand("reduce-hasse", "Run a diagram over the augmented Hasse graph");
    hasse_cmd->add_option("--cc", hasse_args.cc)->required();
    hasse_cmd->add_option("--diagram", hasse_args.diagram)->required();
    hasse_cmd->add_option("--dot", hasse_args.dot, "write the augmented Hasse graph as DOT");
    hasse_cmd->add_option("--seed", hasse_args.seed);

    std::string mesh, feat_out;
    auto* feat_cmd = app.add_subcommand("features", "Mesh vertex, edge and face features");
    feat_cmd->add_option("--mesh", mesh, "OFF file")->required();
    feat_cmd->add_option("--out", feat_out);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (*lift_cmd) run_lift(lift, out);
        else if (*mat_cmd) run_matrices(mats, out);
        else if (*pool_cmd) run_pool(pool, out);
        else if (*train_cmd) return run_train(config, out);
        else if (*hasse_cmd) return run_reduce_hasse(hasse_args, out, err);
        else if (*feat_cmd) run_features(mesh, feat_out, out);
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace ccx
