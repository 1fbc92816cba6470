#include "brute.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace henson;

namespace {

auto X(int i) { return Term::x(i); }
auto Y(int j) { return Term::y(j); }

auto graph(const VertexSet& vs, const std::vector<std::pair<Vertex, Vertex>>& edges) -> Graph
{
    Graph g(vs);
    for (auto [u, v] : edges)
        g.add_edge(u, v);
    return g;
}

auto cross_edges(const SequenceWindow& w, int i, int j) -> bool
{
    for (std::size_t l = 0; l < w.copies.size(); ++l)
        for (std::size_t m = l + 1; m < w.copies.size(); ++m)
            if (w.graph.adjacent(w.copies[l][static_cast<std::size_t>(i)], w.copies[m][static_cast<std::size_t>(j)]))
                return true;
    return false;
}

} // namespace

TEST(Gamma, EmptySubsetGivesDisconnectedCopies)
{
    auto g = graph({1, 2}, {});
    auto w = gamma({}, Tuple{1, 2}, {}, g, 4);
    EXPECT_EQ(w.copies.size(), 4U);
    EXPECT_EQ(w.graph.size(), 8U);
    EXPECT_EQ(w.graph.edge_count(), 0U);
}

TEST(Gamma, NonAdjacentPairAtNThree)
{
    auto g = graph({1, 2}, {});
    Tuple b{1, 2};
    auto w = gamma({}, b, {1, 2}, g, 3);
    for (std::size_t l = 0; l < 3; ++l)
        for (std::size_t m = 0; m < 3; ++m) {
            EXPECT_EQ(w.graph.adjacent(w.copies[l][0], w.copies[m][1]), l < m) << l << " " << m;
            if (l != m) {
                EXPECT_FALSE(w.graph.adjacent(w.copies[l][0], w.copies[m][0]));
                EXPECT_FALSE(w.graph.adjacent(w.copies[l][1], w.copies[m][1]));
            }
        }
    EXPECT_EQ(w.graph.edge_count(), 3U);
    EXPECT_TRUE(is_kn_free(w.graph, 3));
}

TEST(Gamma, CopiesHaveTheBaseType)
{
    auto g = graph({1, 2, 3, 9}, {{1, 9}, {2, 3}, {3, 9}});
    Tuple b{1, 2, 3};
    auto w = gamma({9}, b, {1, 3}, g, 5);
    for (const auto& copy : w.copies)
        EXPECT_TRUE(qf_type_equal_over(w.graph, copy, b, {9}));
    auto all = make_set(b);
    for (std::size_t l = 1; l < w.copies.size(); ++l)
        EXPECT_TRUE(set_intersection(make_set(w.copies[l]), all).empty());
}

TEST(Gamma, SubsetMustLieInTuple)
{
    auto g = graph({1, 2, 3}, {});
    EXPECT_THROW((void)gamma({}, Tuple{1, 2}, {3}, g, 2), PreconditionError);
}

TEST(RealizeTemplate, GammaRoundTrip)
{
    auto g = graph({1, 2, 3, 7}, {{1, 7}, {2, 7}});
    Tuple b{1, 2, 3};
    auto w1 = gamma({7}, b, {1, 2}, g, 4);
    auto w2 = realize_template(gamma_template(b, {1, 2}), {7}, b, g, 4);
    EXPECT_EQ(w1.graph, w2.graph);
    EXPECT_EQ(w1.copies, w2.copies);
}

TEST(RealizeTemplate, AllConstantRepeatsTheTuple)
{
    auto g = graph({1, 2, 7, 8}, {{1, 7}, {1, 2}, {7, 8}});
    Tuple b{1, 2};
    SequenceTemplate t{2, {0, 1}, {}};
    auto w = realize_template(t, {7}, b, g, 5);
    for (const auto& copy : w.copies)
        EXPECT_EQ(copy, b);
    EXPECT_EQ(w.graph, g.induced({1, 2, 7}));
}

TEST(RealizeTemplate, LengthOneIsTheBaseCopy)
{
    auto g = graph({1, 2, 7}, {{1, 7}});
    Tuple b{2, 1};
    SequenceTemplate t{2, {}, {{0, 1}, {1, 0}}};
    auto w = realize_template(t, {7}, b, g, 1);
    ASSERT_EQ(w.copies.size(), 1U);
    EXPECT_EQ(w.copies[0], b);
    EXPECT_EQ(w.graph, g);
}

TEST(RealizeTemplate, CopyMajorNaming)
{
    auto g = graph({1, 2, 5}, {});
    SequenceTemplate t{2, {1}, {}};
    auto w = realize_template(t, {}, Tuple{1, 2}, g, 3);
    EXPECT_EQ(w.copies[1], (Tuple{6, 2}));
    EXPECT_EQ(w.copies[2], (Tuple{8, 2}));
}

TEST(RealizeTemplate, EveryPairOfCopiesSharesTheCrossPattern)
{
    auto g = graph({1, 2, 3}, {{1, 2}});
    Tuple b{1, 2, 3};
    SequenceTemplate t{3, {}, {{0, 2}, {2, 1}}};
    auto w = realize_template(t, {}, b, g, 5);
    for (std::size_t l = 0; l < 5; ++l)
        for (std::size_t m = l + 1; m < 5; ++m)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    bool expected = (i == 0 && j == 2) || (i == 2 && j == 1);
                    EXPECT_EQ(w.graph.adjacent(w.copies[l][static_cast<std::size_t>(i)], w.copies[m][static_cast<std::size_t>(j)]), expected);
                }
}

TEST(TemplateValidity, VerticalEdgeStacksIntoClique)
{
    auto g = graph({1}, {});
    SequenceTemplate t{1, {}, {{0, 0}}};
    EXPECT_FALSE(is_template_valid(t, {}, Tuple{1}, g, 3));
    auto w = realize_template(t, {}, Tuple{1}, g, 3);
    EXPECT_TRUE(find_clique(w.graph, 3));
}

TEST(TemplateValidity, GammaOfWitnessIsValid)
{
    auto g = graph({1, 2}, {});
    auto v = divides_formula(ConjFormula(1, 2, {Literal::edge(X(0), Y(0)), Literal::edge(X(0), Y(1))}), Tuple{1, 2},
        PointedGraph{g, {}, {}, {}}, 3);
    ASSERT_TRUE(v.witness);
    EXPECT_TRUE(is_template_valid(gamma_template(Tuple{1, 2}, v.witness->subset), {}, Tuple{1, 2}, g, 3));
}

TEST(TemplateValidity, BaseAlreadyHasKn)
{
    auto g = graph({1, 2, 3}, {{1, 2}, {2, 3}, {1, 3}});
    SequenceTemplate t{1, {}, {}};
    EXPECT_FALSE(is_template_valid(t, {2, 3}, Tuple{1}, g, 3));
}

TEST(TemplateValidity, WindowOfLengthNDecides)
{
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 150; ++trial) {
        int n = 3 + static_cast<int>(rng() % 2);
        auto g = random_kn_free(n, 5, 0.5, rng());
        auto C = random_subset(rng, g.vertices(), 2);
        auto b = random_tuple(rng, set_difference(g.vertices(), C), 1 + rng() % 2);
        SequenceTemplate t;
        t.positions = static_cast<int>(b.size());
        for (int i = 0; i < t.positions; ++i) {
            if (rng() % 4 == 0) {
                t.constant.push_back(i);
                continue;
            }
        }
        for (int i = 0; i < t.positions; ++i)
            for (int j = 0; j < t.positions; ++j)
                if (!t.is_constant(i) && !t.is_constant(j) && rng() % 3 == 0)
                    t.cross.emplace_back(i, j);
        bool valid = is_template_valid(t, C, b, g, n);
        for (int L = n; L <= 3 * n; L += 2)
            EXPECT_EQ(valid, is_kn_free(realize_template(t, C, b, g, L).graph, n)) << to_string(t) << " L=" << L;
    }
}

TEST(TemplateValidity, ValidWindowsHaveNoVerticalEdgesAndSmallCliques)
{
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 3 + static_cast<int>(rng() % 2);
        auto g = random_kn_free(n, 4, 0.5, rng());
        auto C = random_subset(rng, g.vertices(), 1);
        auto b = random_tuple(rng, set_difference(g.vertices(), C), 1 + rng() % 2);
        for (const auto& t : enumerate_templates(C, b, g, n)) {
            auto w = realize_template(t, C, b, g, 2 * n);
            for (int i = 0; i < t.positions; ++i)
                if (!t.is_constant(i)) {
                    EXPECT_FALSE(cross_edges(w, i, i)) << to_string(t);
                }
            if (static_cast<int>(b.size()) < n - 1) {
                auto copies = VertexSet{};
                for (const auto& c : w.copies)
                    copies = set_union(copies, make_set(c));
                EXPECT_FALSE(find_clique_within(w.graph, copies, static_cast<std::size_t>(n - 1))) << to_string(t);
            }
        }
    }
}

TEST(KInconsistent, GammaWindowOfStar)
{
    auto g = graph({1, 2}, {});
    Tuple b{1, 2};
    ConjFormula f(1, 2, {Literal::edge(X(0), Y(0)), Literal::edge(X(0), Y(1))});
    auto w = gamma({}, b, {1, 2}, g, 3);
    EXPECT_TRUE(check_k_inconsistent(f, w, 2, 3));
    EXPECT_FALSE(check_k_inconsistent(f, w, 1, 3));
}

TEST(KInconsistent, DisconnectedTemplateNeverInconsistent)
{
    auto g = graph({1, 2, 3}, {{1, 2}});
    Tuple b{1, 2, 3};
    ConjFormula f(1, 3, {Literal::edge(X(0), Y(0))});
    auto w = realize_template(SequenceTemplate{3, {}, {}}, {}, b, g, 6);
    for (int k = 1; k <= 6; ++k) {
        EXPECT_FALSE(check_k_inconsistent(f, w, k, 3));
        // Same answer from a plain search for triangles in the optimal extension.
        std::vector<Instance> inst;
        for (int l = 0; l < k; ++l)
            inst.push_back({&f, w.copies[static_cast<std::size_t>(l)]});
        auto cand = optimal_candidate(instantiate_instances(inst, w.graph), w.graph);
        EXPECT_FALSE(brute::least_clique(cand.extension, 3));
    }
}

TEST(KInconsistent, WidthOutOfRange)
{
    auto g = graph({1}, {});
    auto w = gamma({}, Tuple{1}, {}, g, 2);
    EXPECT_THROW((void)check_k_inconsistent(ConjFormula(1, 1, {}), w, 3, 3), PreconditionError);
    EXPECT_THROW((void)check_k_inconsistent(ConjFormula(1, 1, {}), w, 0, 3), PreconditionError);
}

TEST(EnumerateTemplates, SingleIsolatedPosition)
{
    auto g = graph({1}, {});
    auto ts = enumerate_templates({}, Tuple{1}, g, 3);
    ASSERT_EQ(ts.size(), 2U);
    EXPECT_EQ(ts[0], (SequenceTemplate{1, {}, {}}));
    EXPECT_EQ(ts[1], (SequenceTemplate{1, {0}, {}}));
}

TEST(EnumerateTemplates, CountsWithoutFiltering)
{
    auto g = graph({1, 2, 3, 4}, {});
    std::uint64_t no_constant = 0;
    std::uint64_t total = 0;
    for_each_template({}, Tuple{1, 2, 3, 4}, g, 3, Theory::T0, [&](const SequenceTemplate& t) {
        ++total;
        if (t.constant.empty())
            ++no_constant;
        return false;
    });
    EXPECT_EQ(no_constant, 65536U);
    // Sum over constant sets of 2^(free^2).
    EXPECT_EQ(total, 65536U + 4 * 512U + 6 * 16U + 4 * 2U + 1U);
}

TEST(EnumerateTemplates, GammaPatternAppears)
{
    auto g = graph({1, 2, 3}, {{2, 3}});
    Tuple b{1, 2, 3};
    auto ts = enumerate_templates({}, b, g, 3);
    auto t = gamma_template(b, {1, 3});
    ASSERT_TRUE(is_template_valid(t, {}, b, g, 3));
    EXPECT_NE(std::find(ts.begin(), ts.end(), t), ts.end());
    for (const auto& s : ts)
        EXPECT_TRUE(is_template_valid(s, {}, b, g, 3));
}

TEST(EnumerateTemplates, PositionCap)
{
    Graph g(VertexSet{1, 2, 3});
    EXPECT_THROW(for_each_template({}, Tuple{1, 2, 3}, g, 3, Theory::Tn, [](const SequenceTemplate&) { return false; }, 2),
        PreconditionError);
}

TEST(FourPositionScan, EmptyPatternHasEdgeFreePair)
{
    auto g = graph({0, 1, 2, 3}, {});
    auto w = realize_template(SequenceTemplate{4, {}, {}}, {}, Tuple{0, 1, 2, 3}, g, 6);
    auto p = detail::edge_free_column_pair(w, 4);
    ASSERT_TRUE(p);
    EXPECT_EQ(*p, (std::pair<int, int>{0, 1}));
}

TEST(FourPositionScan, AllOffDiagonalPatternHasTriangle)
{
    SequenceTemplate t{4, {}, {}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j)
                t.cross.emplace_back(i, j);
    auto g = graph({0, 1, 2, 3}, {});
    auto w = realize_template(t, {}, Tuple{0, 1, 2, 3}, g, 6);
    EXPECT_FALSE(detail::edge_free_column_pair(w, 4));
    VertexSet tri{w.copies[0][0], w.copies[1][1], w.copies[2][2]};
    EXPECT_TRUE(brute::is_clique(w.graph, tri));
}

TEST(FourPositionScan, FullScanHasNoViolations)
{
    auto r = lemma61_scan();
    EXPECT_EQ(r.total, 67689U);
    EXPECT_EQ(r.violations, 0U);
    EXPECT_EQ(r.edge_free_pair + r.triangle + r.violations, r.total);
    EXPECT_FALSE(r.counterexample);
    auto again = lemma61_scan();
    EXPECT_EQ(again.edge_free_pair, r.edge_free_pair);
    EXPECT_EQ(again.triangle, r.triangle);
}

TEST(ForkingExample, Construction)
{
    auto e3 = build_example_62(3);
    EXPECT_TRUE(e3.graph.base.empty());
    EXPECT_EQ(e3.b.size(), 4U);
    EXPECT_EQ(e3.graph.graph.edge_count(), 0U);
    EXPECT_EQ(e3.phi.disjuncts.size(), 6U);
    for (const auto& f : e3.phi.disjuncts)
        EXPECT_EQ(f.conjuncts().size(), 2U);

    auto e4 = build_example_62(4);
    ASSERT_EQ(e4.graph.base.size(), 1U);
    for (auto v : e4.b)
        EXPECT_TRUE(e4.graph.graph.adjacent(v, e4.graph.base[0]));
    for (const auto& f : e4.phi.disjuncts) {
        EXPECT_EQ(f.conjuncts().size(), 3U);
        EXPECT_TRUE(f.has(Literal::edge(X(0), Term::c(e4.graph.base[0]))));
    }
    for (int n = 3; n <= 5; ++n)
        EXPECT_TRUE(is_kn_free(build_example_62(n).graph.graph, n));
    EXPECT_THROW((void)build_example_62(2), PreconditionError);
}

TEST(ForkingExample, VerifiesAtThreeAndFour)
{
    auto r3 = verify_example_62(3, 6);
    EXPECT_TRUE(r3.forks);
    EXPECT_TRUE(r3.nondividing);
    EXPECT_EQ(r3.violations, 0U);
    EXPECT_EQ(r3.dividing_disjuncts, 6);
    auto r4 = verify_example_62(4, 6);
    EXPECT_TRUE(r4.forks);
    EXPECT_TRUE(r4.nondividing);
}

TEST(ForkingExample, TamperedInputIsRefused)
{
    auto ex = build_example_62(3);
    ex.graph.graph.add_edge(ex.b[0], ex.b[1]);
    EXPECT_THROW((void)verify_example_62(ex, 6), PreconditionError);
}

TEST(SequenceTemplate, ValidateAndPrint)
{
    SequenceTemplate t{3, {1}, {{0, 2}}};
    EXPECT_NO_THROW(t.validate());
    EXPECT_EQ(to_string(t), "positions=3 constant={2} cross={(1,3)}");
    SequenceTemplate bad{3, {1}, {{0, 1}}};
    EXPECT_THROW(bad.validate(), PreconditionError);
}
