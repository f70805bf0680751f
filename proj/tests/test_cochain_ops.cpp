#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "fixtures.hpp"

using namespace ccx;
using fixtures::small_cc;

namespace {

CochainMap map_of(const NeighborhoodMatrix& n) { return CochainMap::from(n); }

Matrix col(std::initializer_list<double> v) {
    Matrix m(static_cast<Eigen::Index>(v.size()), 1);
    Eigen::Index i = 0;
    for (double x : v) m(i++, 0) = x;
    return m;
}

}  // namespace

TEST_CASE("apply_map examples", "[apply]") {
    const auto cc = small_cc();
    const auto b01 = map_of(incidence(cc, 0, 1));
    REQUIRE(b01.domain_rank == 1);
    REQUIRE(b01.codomain_rank == 0);
    const auto out = apply_map(b01, Cochain{1, col({5})});
    REQUIRE(out.rank == 0);
    REQUIRE(out.data == col({5, 5, 0}));

    const auto id = map_of(identity(cc, 0));
    const Cochain h{0, col({1, 2, 3})};
    REQUIRE(apply_map(id, h).data == h.data);
    REQUIRE(apply_map(b01, Cochain{1, Matrix::Zero(1, 4)}).data.isZero());
    REQUIRE_THROWS_AS(apply_map(b01, Cochain{0, col({1, 2, 3})}), Error);
    REQUIRE_THROWS_AS(apply_map(b01, Cochain{1, col({1, 2})}), Error);
}

TEST_CASE("apply_map is linear", "[apply][property]") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-2, 2);
    for (const auto& [name, cc] : fixtures::all_ccs()) {
        for (int k = 1; k <= cc.dim(); ++k) {
            const auto g = map_of(incidence(cc, 0, k)).transposed();
            const auto n = static_cast<Eigen::Index>(cc.rank_size(0));
            const Cochain h{0, fixtures::random_matrix(rng, n, 3)};
            const Cochain q{0, fixtures::random_matrix(rng, n, 3)};
            const double a = u(rng);
            const double b = u(rng);
            const Matrix lhs = apply_map(g, Cochain{0, a * h.data + b * q.data}).data;
            const Matrix rhs = a * apply_map(g, h).data + b * apply_map(g, q).data;
            REQUIRE((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
}

TEST_CASE("push_forward examples", "[push]") {
    const auto cc = small_cc();
    const auto b02 = map_of(incidence(cc, 0, 2));
    const auto out = push_forward(b02, Cochain{2, col({7})}, Aggregation::Sum);
    REQUIRE(out.data == col({7, 7, 7}));

    const auto b01t = map_of(incidence(cc, 0, 1)).transposed();
    const Cochain h0{0, col({1, 3, 10})};
    REQUIRE(push_forward(b01t, h0, Aggregation::Mean).data == col({2}));
    REQUIRE(push_forward(b01t, h0, Aggregation::Max).data == col({3}));
    REQUIRE(push_forward(b01t, h0, Aggregation::Sum, rowmap::relu()).data == col({4}));

    // Empty neighborhoods give zero rows for every aggregation.
    const auto b01 = map_of(incidence(cc, 0, 1));
    for (auto agg : {Aggregation::Sum, Aggregation::Mean, Aggregation::Max}) {
        const auto r = push_forward(b01, Cochain{1, col({-4})}, agg);
        REQUIRE(r.data == col({-4, -4, 0}));
    }

    const auto single = map_of(incidence(cc, 1, 2)).transposed();
    REQUIRE(push_forward(single, Cochain{1, col({9})}, Aggregation::Mean).data == col({9}));
}

TEST_CASE("sum push-forward equals the dense product on binary maps", "[push][property]") {
    std::mt19937_64 rng(17);
    for (const auto& [name, cc] : fixtures::all_ccs()) {
        for (int r = 0; r <= cc.dim(); ++r)
            for (int k = r + 1; k <= cc.dim(); ++k) {
                const auto g = map_of(incidence(cc, r, k));
                for (const auto& m : {g, g.transposed()}) {
                    const Cochain h{m.domain_rank,
                                    fixtures::random_matrix(rng, static_cast<Eigen::Index>(cc.rank_size(m.domain_rank)), 2)};
                    const Matrix dense = to_dense(m.matrix) * h.data;
                    INFO(name << " " << r << "," << k);
                    REQUIRE((push_forward(m, h, Aggregation::Sum).data - dense).cwiseAbs().maxCoeff() <= 1e-12);
                    REQUIRE((apply_map(m, h).data - dense).cwiseAbs().maxCoeff() <= 1e-12);
                }
            }
    }
}

TEST_CASE("merge_node", "[merge]") {
    const auto cc = small_cc();
    const auto g1 = map_of(incidence(cc, 0, 1)).transposed();  // C0 -> C1
    const auto g2 = map_of(incidence(cc, 1, 2));               // C2 -> C1
    const Cochain h0{0, col({1, 2, 4})};
    const Cochain h2{2, col({10})};
    const Matrix b01 = fixtures::brute_incidence(cc, 0, 1);
    const Matrix b12 = fixtures::brute_incidence(cc, 1, 2);
    const Matrix expect = b01.transpose() * h0.data + b12 * h2.data;
    REQUIRE(merge_node(g1, g2, h0, h2, Combine::Sum).data == expect);

    const auto cat = merge_node(g1, g2, h0, h2, Combine::Concat, rowmap::tanh());
    REQUIRE(cat.data.cols() == 2);
    REQUIRE(cat.data(0, 0) == Catch::Approx(std::tanh(3.0)));
    REQUIRE(cat.data(0, 1) == Catch::Approx(std::tanh(10.0)));

    REQUIRE(merge_node(g1, g2.zero(), h0, h2, Combine::Sum).data == push_forward(g1, h0, Aggregation::Sum).data);

    const auto id = map_of(identity(cc, 0));
    const Cochain q{0, col({5, 6, 7})};
    REQUIRE(merge_node(id, id, h0, q, Combine::Sum).data == h0.data + q.data);

    REQUIRE_THROWS_AS(merge_node(g1, id, h0, h0, Combine::Sum), Error);
    REQUIRE_THROWS_AS(merge_node(id, id, h0, Cochain{0, Matrix::Zero(3, 2)}, Combine::Sum), Error);
}

TEST_CASE("split_node", "[split]") {
    const auto cc = small_cc();
    const auto id = map_of(identity(cc, 1));
    const Cochain h{1, col({3})};
    auto [a, b] = split_node(id, id, h);
    REQUIRE(a.data == h.data);
    REQUIRE(b.data == h.data);

    const auto g1 = map_of(incidence(cc, 0, 1));               // C1 -> C0
    const auto g2 = map_of(incidence(cc, 1, 2)).transposed();  // C1 -> C2
    auto [h0, h2] = split_node(g1, g2, h, rowmap::identity(), rowmap::relu());
    REQUIRE(h0.rank == 0);
    REQUIRE(h2.rank == 2);
    REQUIRE(h0.data == fixtures::brute_incidence(cc, 0, 1) * h.data);
    REQUIRE(h2.data == fixtures::brute_incidence(cc, 1, 2).transpose() * h.data);

    auto [z0, z2] = split_node(g1, g2, Cochain{1, Matrix::Zero(1, 2)});
    REQUIRE(z0.data.isZero());
    REQUIRE(z2.data.isZero());
    REQUIRE_THROWS_AS(split_node(g1, g2, Cochain{0, col({1, 2, 3})}), Error);
}

TEST_CASE("map classification", "[classify]") {
    const auto cc = small_cc();
    const auto b01 = map_of(incidence(cc, 0, 1));
    REQUIRE(classify_map(b01.transposed()) == MapClass::Pooling);
    REQUIRE(classify_map(b01) == MapClass::Unpooling);
    REQUIRE(classify_map(map_of(adjacency(cc, 0, 1))) == MapClass::RankPreserving);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            CochainMap g{SparseMatrix(1, 1), i, j};
            const auto c = classify_map(g);
            const int hits = (c == MapClass::Pooling) + (c == MapClass::Unpooling) + (c == MapClass::RankPreserving);
            REQUIRE(hits == 1);
            REQUIRE((c == MapClass::Pooling) == (j > i));
            REQUIRE((c == MapClass::Unpooling) == (j < i));
        }
}

TEST_CASE("graph pooling through clusters", "[graphpool]") {
    const Graph c4 = fixtures::cycle_graph(4);
    const Cochain h0{0, col({1, 2, 3, 4})};
    const auto r = graph_pool_via_clusters(c4, {{0, 1, 2}, {3}}, h0, Aggregation::Sum);
    REQUIRE(r.cc.rank_size(2) == 1);
    REQUIRE(r.pooled.rank == 2);
    REQUIRE(r.pooled.data == col({6}));

    try {
        graph_pool_via_clusters(c4, {{0, 1}, {2, 3}}, h0, Aggregation::Sum);
        FAIL("expected EmptyAugmentation");
    } catch (const Error& e) {
        REQUIRE(e.code() == ErrorCode::EmptyAugmentation);
    }
    try {
        graph_pool_via_clusters(c4, {{0, 1, 2}, {2, 3}}, h0, Aggregation::Sum);
        FAIL("expected NotAPartition");
    } catch (const Error& e) {
        REQUIRE(e.code() == ErrorCode::NotAPartition);
    }
    REQUIRE_THROWS_AS(graph_pool_via_clusters(c4, {{0, 1, 2}}, h0, Aggregation::Sum), Error);

    const auto all = graph_pool_via_clusters(c4, {{0, 1, 2, 3}}, h0, Aggregation::Mean);
    REQUIRE(all.pooled.data == col({2.5}));
    const auto zero = graph_pool_via_clusters(c4, {{0, 1, 2, 3}}, Cochain{0, Matrix::Zero(4, 2)}, Aggregation::Sum);
    REQUIRE(zero.pooled.data.isZero());
}

TEST_CASE("cochain files round-trip", "[io]") {
    std::mt19937_64 rng(2);
    const Cochain c{1, fixtures::random_matrix(rng, 5, 3, 1e3)};
    std::stringstream ss;
    write_cochain(ss, c);
    const Cochain back = read_cochain(ss);
    REQUIRE(back.rank == 1);
    REQUIRE(back.data == c.data);
    std::istringstream bad("0 2 2\n1 2\n3\n");
    REQUIRE_THROWS_AS(read_cochain(bad), Error);
}
