#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"

using namespace ccx;
using fixtures::cycle_graph;
using fixtures::path_graph;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::ParseError;
}

// Ball of radius n around each vertex from repeated neighbor expansion.
std::set<CellSet> ball_oracle(const Graph& g, int n) {
    const auto adj = g.adjacency_lists();
    std::set<CellSet> out;
    for (Vertex c = 0; c < g.vertex_count; ++c) {
        std::set<Vertex> ball{c};
        for (int step = 0; step < n; ++step) {
            auto grown = ball;
            for (Vertex v : ball) grown.insert(adj[v].begin(), adj[v].end());
            ball = grown;
        }
        out.insert(CellSet(std::vector<Vertex>(ball.begin(), ball.end())));
    }
    return out;
}

}  // namespace

TEST_CASE("graph containers", "[graph]") {
    const auto g = make_graph(4, {{1, 0}, {0, 1}, {2, 3}});
    REQUIRE(g.edges.size() == 2);
    REQUIRE(g.edges[0] == std::pair<Vertex, Vertex>{0, 1});
    REQUIRE(g.has_edge(1, 0));
    REQUIRE_FALSE(g.has_edge(1, 2));
    REQUIRE(code_of([] { make_graph(2, {{1, 1}}); }) == ErrorCode::SelfLoop);
    REQUIRE(code_of([] { make_graph(2, {{0, 2}}); }) == ErrorCode::VertexOutOfRange);
    REQUIRE(connected_components(g) == std::vector<std::size_t>{0, 0, 1, 1});
    REQUIRE(bfs_distances(g, 0) == std::vector<int>{0, 1, -1, -1});
}

TEST_CASE("graph_cc keeps vertices and edges", "[graph]") {
    const auto cc = graph_cc(path_graph(4));
    REQUIRE(cc.dim() == 1);
    REQUIRE(cc.rank_size(0) == 4);
    REQUIRE(cc.rank_size(1) == 3);
}

TEST_CASE("n-hop lifting examples", "[nhop]") {
    const auto p3 = n_hop_cc(path_graph(3), 2);
    REQUIRE(p3.rank_size(2) == 1);
    REQUIRE(p3.cells(2)[0] == CellSet{0, 1, 2});
    REQUIRE(n_hop_cc(make_graph(1, {}), 2).dim() == 0);
    const auto c4 = n_hop_cc(cycle_graph(4), 2);
    REQUIRE(c4.rank_size(2) == 1);
    REQUIRE(c4.cells(2)[0] == CellSet{0, 1, 2, 3});
    REQUIRE(code_of([] { n_hop_cc(path_graph(3), 1); }) == ErrorCode::BadParams);
}

TEST_CASE("n-hop cells are the distinct new balls", "[nhop][property]") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const Graph g = fixtures::random_graph(rng, 12, 0.2);
        for (int n : {2, 3}) {
            const auto cc = n_hop_cc(g, n);
            std::set<CellSet> expect;
            for (const auto& b : ball_oracle(g, n))
                if (b.size() > 2 || (b.size() == 2 && !g.has_edge(b.front(), b.back()))) expect.insert(b);
            std::set<CellSet> got(cc.cells(n).begin(), cc.cells(n).end());
            REQUIRE(got == expect);
        }
    }
}

TEST_CASE("path lifting", "[paths]") {
    const auto g = path_graph(3);
    const auto cc = path_cc(g, {{0, 1, 2}});
    REQUIRE(cc.cells(2) == std::vector<CellSet>{CellSet{0, 1, 2}});
    REQUIRE(code_of([&] { path_cc(g, {{0, 1}}); }) == ErrorCode::TooShort);
    REQUIRE(code_of([&] { path_cc(g, {{0, 2, 1}}); }) == ErrorCode::NotAPath);
    REQUIRE(path_cc(g, {{0, 1, 2}, {2, 1, 0}}).rank_size(2) == 1);
    // Walks are accepted; the cell is their vertex set.
    REQUIRE(path_cc(g, {{0, 1, 0, 1, 2}}).cells(2)[0] == CellSet{0, 1, 2});
}

TEST_CASE("loop lifting", "[loops]") {
    const auto c4 = cycle_graph(4);
    REQUIRE(loop_cc(c4, {{0, 1, 2, 3}}).cells(2)[0] == CellSet{0, 1, 2, 3});
    const auto chord = make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}});
    REQUIRE(code_of([&] { loop_cc(chord, {{0, 1, 2, 3}}); }) == ErrorCode::ChordPresent);
    REQUIRE(code_of([&] { loop_cc(c4, {{0, 2, 1, 3}}); }) == ErrorCode::NotACycle);
    REQUIRE(code_of([&] { loop_cc(c4, {{0, 1}}); }) == ErrorCode::NotACycle);
    const auto tri = cycle_graph(3);
    REQUIRE(loop_cc(tri, {{0, 1, 2}}).cells(2)[0].size() == 3);
}

TEST_CASE("loop cells induce exactly their cycle", "[loops][property]") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        const Graph g = fixtures::random_graph(rng, 9, 0.4);
        const auto tris = all_triangles(g);
        const auto cc = loop_cc(g, tris);
        REQUIRE(cc.rank_size(2) == tris.size());
        for (const auto& c : cc.cells(2)) {
            std::size_t inside = 0;
            for (auto [u, v] : g.edges) inside += c.contains(u) && c.contains(v);
            REQUIRE(inside == c.size());
        }
    }
}

TEST_CASE("coface lifting", "[coface]") {
    const auto two = build_cc(4, {{{0, 1}, 1}, {{0, 2}, 1}, {{1, 2}, 1}, {{1, 3}, 1}, {{2, 3}, 1},
                                  {{0, 1, 2}, 2}, {{1, 2, 3}, 2}});
    const auto cc = coface_cc(two);
    REQUIRE(cc.dim() == 3);
    REQUIRE(cc.cells(3) == std::vector<CellSet>{CellSet{0, 1, 2, 3}});

    const auto single = loop_cc(cycle_graph(3), {{0, 1, 2}});
    REQUIRE(coface_cc(single).dim() == 2);
    REQUIRE(coface_cc(graph_cc(path_graph(3))).cell_count() == 5);
    REQUIRE(code_of([&] { coface_cc(cc); }) == ErrorCode::NotTwoDimensional);
    REQUIRE(code_of([] { coface_cc(n_hop_cc(path_graph(5), 2)); }) == ErrorCode::NotTwoDimensional);
}

TEST_CASE("coface cells follow coadjacency", "[coface][property]") {
    const Graph wheel = make_graph(6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 1}});
    const auto sc = loop_cc(wheel, all_triangles(wheel));
    const auto cc = coface_cc(sc);
    std::set<CellSet> expect;
    for (const auto& t : sc.cells(2)) {
        std::set<Vertex> u(t.vertices().begin(), t.vertices().end());
        for (const auto& o : sc.cells(2)) {
            std::vector<Vertex> shared;
            std::set_intersection(t.vertices().begin(), t.vertices().end(), o.vertices().begin(), o.vertices().end(),
                                  std::back_inserter(shared));
            if (o != t && shared.size() == 2) u.insert(o.vertices().begin(), o.vertices().end());
        }
        CellSet c(std::vector<Vertex>(u.begin(), u.end()));
        if (!sc.contains(c)) expect.insert(c);
    }
    REQUIRE(std::set<CellSet>(cc.cells(3).begin(), cc.cells(3).end()) == expect);
}

TEST_CASE("augmentation", "[augment]") {
    const auto cc = fixtures::small_cc();
    REQUIRE(code_of([&] { augment(cc, {CellSet{0, 1, 2}}); }) == ErrorCode::DuplicateCell);
    REQUIRE(code_of([] { augment(graph_cc(path_graph(2)), {CellSet{0, 1}}); }) == ErrorCode::DuplicateCell);
    const auto lifted = augment(graph_cc(path_graph(3)), {CellSet{0, 1, 2}});
    REQUIRE(lifted.dim() == 2);
    REQUIRE(to_dense(incidence(lifted, 0, 2).matrix) == Matrix::Ones(3, 1));
    const auto big = build_cc(4, {{{0, 1, 2, 3}, 1}});
    REQUIRE(code_of([&] { augment(big, {CellSet{0, 1}}); }) == ErrorCode::StrictContainmentViolation);
}

TEST_CASE("lattice lifting", "[lattice]") {
    const auto l3 = lattice_cc(3, 3);
    REQUIRE(l3.rank_size(0) == 9);
    REQUIRE(l3.rank_size(1) == 12);
    REQUIRE(l3.rank_size(2) == 4);
    REQUIRE(lattice_cc(2, 2).rank_size(2) == 1);
    const auto l4 = lattice_cc(4, 4, 2, 2);
    REQUIRE(l4.rank_size(2) == 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) REQUIRE_FALSE(l4.cells(2)[i].intersects(l4.cells(2)[j]));
    REQUIRE(code_of([] { lattice_cc(2, 3, 3); }) == ErrorCode::BadWindow);
    REQUIRE(code_of([] { lattice_cc(3, 3, 2, 0); }) == ErrorCode::BadWindow);
}

TEST_CASE("lattice block count formula", "[lattice][property]") {
    for (int h = 2; h <= 6; ++h)
        for (int w = 2; w <= 6; ++w)
            for (int win = 2; win <= std::min(h, w); ++win)
                for (int s = 1; s <= 3; ++s) {
                    const auto cc = lattice_cc(h, w, win, s);
                    const std::size_t expect = static_cast<std::size_t>(((h - win) / s + 1) * ((w - win) / s + 1));
                    REQUIRE(cc.rank_size(0) == static_cast<std::size_t>(h * w));
                    REQUIRE(cc.rank_size(1) == static_cast<std::size_t>(h * (w - 1) + w * (h - 1)));
                    REQUIRE(cc.rank_size(2) == expect);
                    for (const auto& c : cc.cells(2)) REQUIRE(c.size() == static_cast<std::size_t>(win * win));
                }
}

TEST_CASE("every lift is a set of distinct cells", "[property]") {
    for (const auto& [name, cc] : fixtures::all_ccs()) {
        std::set<CellSet> seen;
        for (const auto& rc : cc.ranked_cells()) REQUIRE(seen.insert(rc.cell).second);
        REQUIRE(seen.size() == cc.cell_count());
    }
}
