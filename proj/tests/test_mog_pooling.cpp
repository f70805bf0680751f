#include <catch2/catch_amalgamated.hpp>

#include <deque>
#include <set>

#include "fixtures.hpp"

using namespace ccx;

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

// Mean hop distance to every vertex of the component, the vertex itself included.
std::vector<double> agd_oracle(const Graph& g) {
    std::vector<double> out(g.vertex_count);
    for (Vertex s = 0; s < g.vertex_count; ++s) {
        const auto d = fixtures::relaxed_distances(g, s);
        double sum = 0;
        int n = 0;
        for (double x : d)
            if (std::isfinite(x)) {
                sum += x;
                ++n;
            }
        out[s] = sum / n;
    }
    return out;
}

bool connected_in(const Graph& g, const CellSet& vs) {
    const std::set<Vertex> in(vs.vertices().begin(), vs.vertices().end());
    std::set<Vertex> seen{*in.begin()};
    std::deque<Vertex> q{*in.begin()};
    while (!q.empty()) {
        const Vertex u = q.front();
        q.pop_front();
        for (auto [a, b] : g.edges) {
            const Vertex w = a == u ? b : (b == u ? a : u);
            if (w != u && in.count(w) && seen.insert(w).second) q.push_back(w);
        }
    }
    return seen.size() == in.size();
}

}  // namespace

TEST_CASE("average geodesic distance examples", "[agd]") {
    for (double v : agd(fixtures::cycle_graph(4))) REQUIRE(v == 1.0);
    const auto p3 = agd(fixtures::path_graph(3));
    REQUIRE(p3[0] == 1.0);
    REQUIRE(p3[1] == Catch::Approx(2.0 / 3.0).epsilon(1e-15));
    REQUIRE(p3[2] == 1.0);
    REQUIRE(agd(make_graph(1, {})) == std::vector<double>{0.0});
    // Components are measured separately.
    const auto two = agd(make_graph(5, {{0, 1}, {2, 3}, {3, 4}}));
    REQUIRE(two[0] == 0.5);
    REQUIRE(two[3] == Catch::Approx(2.0 / 3.0));
}

TEST_CASE("average geodesic distance matches relaxation", "[agd][property]") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 20; ++t) {
        const auto g = fixtures::random_graph(rng, 5 + t, 0.2);
        const auto got = agd(g);
        const auto want = agd_oracle(g);
        for (std::size_t i = 0; i < got.size(); ++i) REQUIRE(std::abs(got[i] - want[i]) <= 1e-12);
    }
}

TEST_CASE("scalar normalization and covers", "[mog]") {
    REQUIRE(normalize_scalar({2, 4, 3}) == std::vector<double>{0, 1, 0.5});
    REQUIRE(normalize_scalar({5, 5}) == std::vector<double>{0.5, 0.5});
    const auto c = make_cover(2, 0.3);
    REQUIRE(c.intervals.size() == 2);
    REQUIRE(c.intervals[0].first == Catch::Approx(0.0));
    REQUIRE(c.intervals[0].second == Catch::Approx(0.65));
    REQUIRE(c.intervals[1].first == Catch::Approx(0.35));
    REQUIRE(c.intervals[1].second == Catch::Approx(1.0));
    const auto c4 = make_cover(4, 0.5);
    for (std::size_t i = 0; i < 4; ++i)
        REQUIRE(c4.intervals[i].second - c4.intervals[i].first == Catch::Approx(1.5 / 4));
    REQUIRE(code_of([] { make_cover(0, 0.3); }) == ErrorCode::BadParams);
    REQUIRE(code_of([] { make_cover(2, 1.0); }) == ErrorCode::BadParams);
    REQUIRE(code_of([] { make_cover(2, 0.0); }) == ErrorCode::BadParams);
}

TEST_CASE("mapper on a path", "[mog]") {
    const auto g = fixtures::path_graph(6);
    const std::vector<double> f{0, 0.2, 0.4, 0.6, 0.8, 1.0};
    const auto r = mog(g, f, MogCover{{{0, 0.65}, {0.35, 1}}});
    REQUIRE(r.components.size() == 2);
    REQUIRE(r.components[0].vertices == CellSet{0, 1, 2, 3});
    REQUIRE(r.components[1].vertices == CellSet{2, 3, 4, 5});
    REQUIRE(r.mog_edges == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}});
    REQUIRE(r.augmented_cc.rank_size(2) == 2);
    REQUIRE(r.augmented_cc.rank_size(1) == 5);

    const auto disjoint = mog(g, f, MogCover{{{0, 0.45}, {0.55, 1}}});
    REQUIRE(disjoint.components.size() == 2);
    REQUIRE(disjoint.mog_edges.empty());

    // Small pieces coincide with existing cells.
    const auto small = mog(g, f, MogCover{{{0, 0.1}, {0.15, 0.45}, {0.5, 1}}});
    REQUIRE(small.skipped.size() == 2);
    REQUIRE(small.components.size() == 1);
    REQUIRE(small.components[0].vertices == CellSet{3, 4, 5});

    // Closed membership: a value on the boundary belongs to both intervals.
    const auto closed = mog(g, f, MogCover{{{0, 0.4}, {0.4, 1}}});
    REQUIRE(closed.components[0].vertices == CellSet{0, 1, 2});
    REQUIRE(closed.components[1].vertices == CellSet{2, 3, 4, 5});
    REQUIRE(closed.mog_edges.size() == 1);

    REQUIRE_THROWS_AS(mog(g, {0, 1}, make_cover(2, 0.3)), Error);
}

TEST_CASE("mapper on a complete graph merges equal components", "[mog]") {
    std::vector<std::pair<Vertex, Vertex>> e;
    for (Vertex u = 0; u < 5; ++u)
        for (Vertex v = u + 1; v < 5; ++v) e.emplace_back(u, v);
    const auto g = make_graph(5, e);
    const auto r = mog(g, normalize_scalar(agd(g)), make_cover(2, 0.3));
    REQUIRE(r.components.size() == 1);
    REQUIRE(r.components[0].vertices.size() == 5);
    REQUIRE(r.mog_edges.empty());
}

TEST_CASE("mapper pooling", "[mog]") {
    const auto g = fixtures::path_graph(6);
    const std::vector<double> f{0, 0.2, 0.4, 0.6, 0.8, 1.0};
    const MogCover cover{{{0, 0.65}, {0.35, 1}}};
    const auto ones = mog_pool(g, Cochain{0, Matrix::Ones(6, 1)}, f, cover, Aggregation::Sum);
    REQUIRE(ones.rank == 2);
    REQUIRE(ones.data == Matrix::Constant(2, 1, 4.0));
    Matrix idx(6, 2);
    for (int i = 0; i < 6; ++i) idx.row(i) << i, -i;
    const auto s = mog_pool(g, Cochain{0, idx}, f, cover, Aggregation::Sum);
    REQUIRE(s.data(0, 0) == 6);
    REQUIRE(s.data(1, 0) == 14);
    REQUIRE(s.data(1, 1) == -14);
    REQUIRE(mog_pool(g, Cochain{0, idx}, f, cover, Aggregation::Mean).data(0, 0) == 1.5);
    REQUIRE(mog_pool(g, Cochain{0, idx}, f, cover, Aggregation::Max).data(1, 1) == -2);
    REQUIRE_THROWS_AS(mog_pool(g, Cochain{0, Matrix::Ones(5, 1)}, f, cover, Aggregation::Sum), Error);
}

TEST_CASE("mapper edges equal the coadjacency of the new cells", "[mog][property]") {
    std::mt19937_64 rng(22);
    for (int t = 0; t < 15; ++t) {
        const auto g = fixtures::random_graph(rng, 10 + 3 * t, 0.15);
        const auto r = mog(g, normalize_scalar(agd(g)), make_cover(2 + t % 4, 0.25 + 0.05 * (t % 5)));
        const auto& cc = r.augmented_cc;
        REQUIRE(cc.rank_size(2) == r.components.size());
        const Matrix b = to_dense(incidence(cc, 0, 2).matrix);
        const Matrix pattern = fixtures::off_pattern(b.transpose() * b);
        Matrix got = Matrix::Zero(pattern.rows(), pattern.cols());
        for (auto [i, j] : r.mog_edges) {
            REQUIRE(i < j);
            const auto ci = static_cast<Eigen::Index>(r.components[i].cell_index);
            const auto cj = static_cast<Eigen::Index>(r.components[j].cell_index);
            got(ci, cj) = got(cj, ci) = 1;
        }
        REQUIRE(got == pattern);
        std::set<CellSet> distinct;
        for (const auto& c : r.components) {
            REQUIRE(c.vertices.size() >= 3);
            REQUIRE(connected_in(g, c.vertices));
            REQUIRE(cc.cell(CellRef{2, c.cell_index}) == c.vertices);
            REQUIRE(distinct.insert(c.vertices).second);
            // Every vertex in the interval's preimage lies in exactly one component of that interval.
        }
        for (const auto& c : r.skipped) REQUIRE(c.vertices.size() <= 2);
    }
}
