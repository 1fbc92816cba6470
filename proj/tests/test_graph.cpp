#include "brute.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace henson;

namespace {

auto complete(const VertexSet& vs) -> Graph
{
    Graph g(vs);
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j)
            g.add_edge(vs[i], vs[j]);
    return g;
}

auto random_graph(std::size_t size, double p, std::uint64_t seed) -> Graph
{
    std::mt19937_64 rng(seed);
    VertexSet vs;
    for (std::size_t i = 0; i < size; ++i)
        vs.push_back(static_cast<Vertex>(3 * i + 1));
    Graph g(vs);
    for (std::size_t i = 0; i < size; ++i)
        for (std::size_t j = i + 1; j < size; ++j)
            if (unit_draw(rng) < p)
                g.add_edge(vs[i], vs[j]);
    return g;
}

} // namespace

TEST(Graph, StoresSymmetricEdges)
{
    Graph g(VertexSet{4, 1, 9});
    g.add_edge(9, 1);
    EXPECT_TRUE(g.adjacent(1, 9));
    EXPECT_TRUE(g.adjacent(9, 1));
    EXPECT_FALSE(g.adjacent(1, 4));
    EXPECT_EQ(g.edge_count(), 1U);
    EXPECT_EQ(g.vertices(), (VertexSet{1, 4, 9}));
    EXPECT_EQ(g.neighbours(1), (VertexSet{9}));
    g.remove_edge(1, 9);
    EXPECT_EQ(g.edge_count(), 0U);
}

TEST(Graph, RejectsLoopsAndUnknownVertices)
{
    Graph g(VertexSet{1, 2});
    EXPECT_THROW(g.add_edge(1, 1), PreconditionError);
    EXPECT_THROW(g.add_edge(1, 3), PreconditionError);
}

TEST(Graph, AddVertexBelowMaximumKeepsEdges)
{
    Graph g(VertexSet{2, 8});
    g.add_edge(2, 8);
    g.add_vertex(5);
    g.add_vertex(11);
    g.add_edge(5, 11);
    EXPECT_EQ(g.vertices(), (VertexSet{2, 5, 8, 11}));
    EXPECT_TRUE(g.adjacent(2, 8));
    EXPECT_TRUE(g.adjacent(5, 11));
    EXPECT_FALSE(g.adjacent(2, 5));
    EXPECT_EQ(g.edge_list(), (std::vector<std::pair<Vertex, Vertex>>{{2, 8}, {5, 11}}));
}

TEST(Graph, InducedSubgraph)
{
    auto g = complete({1, 2, 3, 4});
    auto h = g.induced({1, 3, 4});
    EXPECT_EQ(h.vertices(), (VertexSet{1, 3, 4}));
    EXPECT_EQ(h.edge_count(), 3U);
}

TEST(FindClique, TriangleIsItsOwnClique)
{
    auto w = find_clique(complete({1, 2, 3}), 3);
    ASSERT_TRUE(w);
    EXPECT_EQ(w->members, (VertexSet{1, 2, 3}));
}

TEST(FindClique, FourCycleHasNoTriangle)
{
    Graph g(VertexSet{1, 2, 3, 4});
    g.add_edge(1, 2);
    g.add_edge(2, 3);
    g.add_edge(3, 4);
    g.add_edge(4, 1);
    EXPECT_FALSE(find_clique(g, 3));
}

TEST(FindClique, ZeroIsRejected) { EXPECT_THROW((void)find_clique(Graph{}, 0), PreconditionError); }

TEST(FindClique, RandomTenVertexGraphMatchesSubsetEnumeration)
{
    auto g = random_graph(10, 0.5, 2024);
    auto w = find_clique(g, 4);
    auto expected = brute::least_clique(g, 4);
    ASSERT_EQ(w.has_value(), expected.has_value());
    if (w) {
        EXPECT_EQ(w->members, *expected);
    }
}

TEST(FindClique, AgreesWithEnumerationUpToTwelveVertices)
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 600; ++trial) {
        auto size = static_cast<std::size_t>(rng() % 13);
        auto p = 0.15 + 0.8 * unit_draw(rng);
        auto g = random_graph(size, p, rng());
        for (std::size_t m = 1; m <= 6; ++m) {
            auto w = find_clique(g, m);
            auto expected = brute::least_clique(g, m);
            ASSERT_EQ(w.has_value(), expected.has_value()) << "trial " << trial << " m " << m;
            if (w) {
                ASSERT_EQ(w->members, *expected) << "trial " << trial << " m " << m;
                ASSERT_TRUE(brute::is_clique(g, w->members));
            }
        }
    }
}

TEST(FindClique, WithinCandidateSet)
{
    auto g = complete({1, 2, 3, 4});
    auto w = find_clique_within(g, {2, 3, 4}, 3);
    ASSERT_TRUE(w);
    EXPECT_EQ(w->members, (VertexSet{2, 3, 4}));
    EXPECT_FALSE(find_clique_within(g, {1, 2}, 3));
    auto empty = find_clique_within(g, {}, 0);
    ASSERT_TRUE(empty);
    EXPECT_TRUE(empty->members.empty());
}

TEST(KnFree, SmallCases)
{
    EXPECT_TRUE(is_kn_free(complete({1, 2}), 3));
    EXPECT_FALSE(is_kn_free(complete({1, 2, 3}), 3));
    EXPECT_TRUE(is_kn_free(complete({1, 2, 3}), 4));
}

TEST(KnFree, InheritedByInducedSubgraphs)
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        auto g = random_kn_free(3 + trial % 2, 9, 0.6, rng());
        ASSERT_TRUE(is_kn_free(g, 3 + trial % 2));
        VertexSet keep;
        for (auto v : g.vertices())
            if (rng() & 1U)
                keep.push_back(v);
        EXPECT_TRUE(is_kn_free(g.induced(keep), 3 + trial % 2));
    }
}

TEST(QfType, Reflexive)
{
    auto g = complete({1, 2, 3});
    Tuple t{1, 2};
    EXPECT_TRUE(qf_type_equal_over(g, t, t, {3}));
}

TEST(QfType, EdgePatternDiffers)
{
    Graph g(VertexSet{1, 2, 3, 4});
    g.add_edge(1, 2);
    EXPECT_FALSE(qf_type_equal_over(g, Tuple{1, 2}, Tuple{3, 4}, {}));
}

TEST(QfType, BaseEdgesAndEqualities)
{
    Graph g(VertexSet{1, 2, 3, 9});
    g.add_edge(1, 9);
    g.add_edge(2, 9);
    EXPECT_TRUE(qf_type_equal_over(g, Tuple{1}, Tuple{2}, {9}));
    EXPECT_FALSE(qf_type_equal_over(g, Tuple{1}, Tuple{3}, {9}));
    EXPECT_TRUE(qf_type_equal_over(g, Tuple{1}, Tuple{3}, {}));
    // Equal to a base vertex differs from adjacent to it.
    EXPECT_FALSE(qf_type_equal_over(g, Tuple{9}, Tuple{1}, {9}));
    EXPECT_FALSE(qf_type_equal_over(g, Tuple{1, 1}, Tuple{1, 2}, {}));
}

TEST(QfType, LengthMismatchThrows)
{
    Graph g(VertexSet{1, 2});
    EXPECT_THROW((void)qf_type_equal_over(g, Tuple{1}, Tuple{1, 2}, {}), PreconditionError);
}

TEST(QfType, EquivalenceRelation)
{
    std::mt19937_64 rng(5);
    auto g = random_graph(6, 0.5, 99);
    const auto& vs = g.vertices();
    VertexSet base{vs[0]};
    std::vector<Tuple> ts;
    for (auto a : vs)
        for (auto b : vs)
            ts.push_back({a, b});
    for (const auto& s : ts) {
        EXPECT_TRUE(qf_type_equal_over(g, s, s, base));
        for (const auto& t : ts) {
            bool st = qf_type_equal_over(g, s, t, base);
            EXPECT_EQ(st, qf_type_equal_over(g, t, s, base));
            if (!st)
                continue;
            for (int k = 0; k < 5; ++k) {
                const auto& u = ts[rng() % ts.size()];
                if (qf_type_equal_over(g, t, u, base)) {
                    EXPECT_TRUE(qf_type_equal_over(g, s, u, base));
                }
            }
        }
    }
}

TEST(RandomKnFree, EmptyGraph) { EXPECT_TRUE(random_kn_free(3, 0, 0.5, 1).empty()); }

TEST(RandomKnFree, FiftyVerticesTriangleFree)
{
    auto g = random_kn_free(3, 50, 0.3, 1);
    EXPECT_EQ(g.size(), 50U);
    EXPECT_TRUE(is_kn_free(g, 3));
    EXPECT_GT(g.edge_count(), 0U);
}

TEST(RandomKnFree, DeterministicPerSeed)
{
    EXPECT_EQ(random_kn_free(4, 30, 0.5, 17), random_kn_free(4, 30, 0.5, 17));
    EXPECT_FALSE(random_kn_free(4, 30, 0.5, 17) == random_kn_free(4, 30, 0.5, 18));
}

TEST(RandomKnFree, MaximalForItsEdgeProposals)
{
    // Density 1 proposes every pair; a rejected pair must close a K_n.
    auto g = random_kn_free(3, 12, 1.0, 3);
    EXPECT_TRUE(is_kn_free(g, 3));
    for (auto u : g.vertices())
        for (auto v : g.vertices())
            if (u < v && !g.adjacent(u, v)) {
                auto h = g;
                h.add_edge(u, v);
                EXPECT_FALSE(is_kn_free(h, 3));
            }
}

TEST(PointedGraph, ValidateChecksMembershipAndDistinctness)
{
    PointedGraph p{Graph(VertexSet{1, 2, 3}), {1}, {}, {}};
    EXPECT_NO_THROW(p.validate());
    p.tuples["b"] = {2, 2};
    EXPECT_THROW(p.validate(), PreconditionError);
    p.tuples["b"] = {2, 3};
    p.sets["A"] = {7};
    EXPECT_THROW(p.validate(), PreconditionError);
}
