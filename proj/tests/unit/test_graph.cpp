#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include <Eigen/Eigenvalues>

#include <oracles.hpp>
#include <setcd/error.hpp>
#include <setcd/graph.hpp>

using namespace setcd;

namespace {

ErrorKind kind_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no setcd::Error thrown");
    return ErrorKind::ParseError;
}

Graph k3()
{
    return Graph::build(3, {{0, 1}, {0, 2}, {1, 2}});
}

} // namespace

TEST_CASE("build canonicalizes endpoints and orders edges")
{
    const auto g = Graph::build(3, {{2, 1}, {1, 0}});
    REQUIRE(g.num_edges() == 2);
    CHECK(g.edge(0) == Edge{0, 1});
    CHECK(g.edge(1) == Edge{1, 2});
    CHECK(g.edge_index(2, 1) == 1);
    CHECK(g.edge_index(1, 2) == 1);
    CHECK_FALSE(g.edge_index(0, 2).has_value());
    CHECK(g.degree(1) == 2);
    CHECK(g.other_end(1, 2) == 1);
}

TEST_CASE("build rejects malformed input")
{
    CHECK(kind_of([] { Graph::build(2, {{0, 0}}); }) == ErrorKind::SelfLoop);
    CHECK(kind_of([] { Graph::build(2, {{0, 1}, {1, 0}}); }) == ErrorKind::DuplicateEdge);
    CHECK(kind_of([] { Graph::build(2, {{0, 2}}); }) == ErrorKind::NodeOutOfRange);
    CHECK(kind_of([] { Graph::build(4, {{0, 1}, {2, 3}}); }) == ErrorKind::DisconnectedGraph);
    CHECK(kind_of([] { Graph::build(3, {{0, 1}}); }) == ErrorKind::DisconnectedGraph);
    CHECK(kind_of([] { k3().edge(3); }) == ErrorKind::IndexOutOfRange);
}

TEST_CASE("incidence signs: +1 at the lower endpoint, -1 at the upper")
{
    const auto g = Graph::build(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    const auto a = incidence_matrix(g);
    CHECK((a - oracle::incidence(g)).cwiseAbs().maxCoeff() == 0.0);
    for (int l = 0; l < g.num_edges(); ++l) {
        CHECK(g.sign(g.edge(l).lo, l) == 1.0);
        CHECK(g.sign(g.edge(l).hi, l) == -1.0);
        CHECK(a.col(l).sum() == 0.0);
    }
    CHECK((laplacian_matrix(g) - oracle::laplacian(g)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Laplacian extremes match hand-computed spectra")
{
    struct Case
    {
        Graph g;
        double lo;
        double hi;
    };
    const std::vector<Case> cases{
        {Graph::build(2, {{0, 1}}), 2.0, 2.0},
        {Graph::build(3, {{0, 1}, {1, 2}}), 1.0, 3.0},
        {k3(), 3.0, 3.0},
        {Graph::build(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}), 2.0, 4.0},
        {Graph::build(4, {{0, 1}, {0, 2}, {0, 3}}), 1.0, 4.0},
        {Graph::build(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}}), 5.0, 5.0},
    };
    for (const auto& c : cases) {
        const auto s = laplacian_extremes(c.g);
        CHECK(s.gamma_min_plus == doctest::Approx(c.lo).epsilon(1e-12));
        CHECK(s.gamma_max == doctest::Approx(c.hi).epsilon(1e-12));
    }
}

TEST_CASE("circulant spectrum agrees with the closed form sum_k 2 - 2 cos(2 pi j k / n)")
{
    for (int degree : {2, 4, 8, 12}) {
        const auto g = circulant_regular(24, degree);
        std::vector<double> eig;
        for (int j = 0; j < 24; ++j) {
            double v = 0.0;
            for (int k = 1; k <= degree / 2; ++k) v += 2.0 - 2.0 * std::cos(2.0 * M_PI * j * k / 24.0);
            eig.push_back(v);
        }
        std::sort(eig.begin(), eig.end());
        const auto s = laplacian_extremes(g);
        CHECK(s.gamma_min_plus == doctest::Approx(eig[1]).epsilon(1e-10));
        CHECK(s.gamma_max == doctest::Approx(eig.back()).epsilon(1e-10));
    }
}

TEST_CASE("circulant_regular")
{
    const auto g = circulant_regular(24, 8);
    CHECK(g.num_nodes() == 24);
    CHECK(g.num_edges() == 96);
    for (int i = 0; i < 24; ++i) CHECK(g.degree(i) == 8);
    CHECK(g.edge_index(0, 4).has_value());
    CHECK(g.edge_index(0, 20).has_value());
    CHECK_FALSE(g.edge_index(0, 5).has_value());

    CHECK(circulant_regular(5, 4).num_edges() == 10);
    CHECK(kind_of([] { circulant_regular(24, 7); }) == ErrorKind::OddDegree);
    CHECK(kind_of([] { circulant_regular(8, 8); }) == ErrorKind::DegreeTooLarge);
    CHECK(kind_of([] { circulant_regular(8, 0); }) == ErrorKind::DegreeTooLarge);
}

TEST_CASE("neighbor sets hold the incident edges")
{
    const auto g = circulant_regular(12, 4);
    const auto sets = neighbor_sets(g);
    REQUIRE(sets.num_sets() == 12);
    CHECK(sets.max_degree == 4);
    for (int i = 0; i < 12; ++i) {
        CHECK(std::is_sorted(sets.sets[i].begin(), sets.sets[i].end()));
        CHECK(static_cast<int>(sets.sets[i].size()) == sets.degrees[i]);
        for (int l : sets.sets[i]) CHECK((g.edge(l).lo == i || g.edge(l).hi == i));
    }
    std::vector<int> count(g.num_edges(), 0);
    for (const auto& s : sets.sets)
        for (int l : s) ++count[l];
    CHECK(std::all_of(count.begin(), count.end(), [](int c) { return c == 2; }));
}

TEST_CASE("assignments partition the edges")
{
    const auto g = k3();
    const auto all = enumerate_assignments(g);
    REQUIRE(all.size() == 8);
    std::set<std::vector<int>> seen;
    for (const auto& a : all) {
        seen.insert(a.owner);
        std::vector<int> hits(g.num_edges(), 0);
        for (int i = 0; i < 3; ++i) {
            for (int l : a.owned[i]) {
                ++hits[l];
                CHECK(a.owner[l] == i);
            }
            CHECK(a.owned[i].size() + a.complement_owned[i].size() == static_cast<std::size_t>(g.degree(i)));
        }
        CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
        const auto c = a.complement(g);
        for (int l = 0; l < g.num_edges(); ++l) CHECK(c.owner[l] == g.other_end(l, a.owner[l]));
    }
    CHECK(seen.size() == 8);
    CHECK(Assignment::from_mask(g, 0).owner == std::vector<int>{0, 0, 1});
    CHECK(Assignment::from_mask(g, 7).owner == std::vector<int>{1, 2, 2});
    CHECK(kind_of([] { enumerate_assignments(circulant_regular(12, 4), 16); }) == ErrorKind::TooManyEdges);
}

TEST_CASE("perfect matching on circulant graphs")
{
    const auto g = circulant_regular(24, 4);
    const auto m = perfect_matching_circulant(g);
    REQUIRE(m.size() == 12);
    std::set<int> covered;
    for (int l : m) {
        covered.insert(g.edge(l).lo);
        covered.insert(g.edge(l).hi);
    }
    CHECK(covered.size() == 24);
    CHECK(kind_of([] { perfect_matching_circulant(circulant_regular(5, 2)); }) == ErrorKind::NoMatchingAvailable);
    CHECK(kind_of([] { perfect_matching_circulant(Graph::build(4, {{0, 2}, {1, 2}, {2, 3}})); }) ==
          ErrorKind::NoMatchingAvailable);
}

TEST_CASE("random connected graphs")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + trial % 6;
        const auto g = random_connected_graph(n, trial % 4, rng);
        CHECK(g.num_nodes() == n);
        CHECK(g.num_edges() == std::min(n - 1 + trial % 4, n * (n - 1) / 2));
        CHECK(laplacian_extremes(g).gamma_min_plus > 0.0);
    }
}
