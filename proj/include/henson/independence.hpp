#pragma once

// Graph-theoretic side of dividing in the K_n-free theory.
//
// B is n-bound to C when some n-set B0 of B u C meets both sides, is a clique
// on its C-part, and joins every B-vertex to every C-vertex. Edges inside the
// B-part are free. A formula instance phi(x, b) with no x = y conjunct divides
// over C exactly when some small B in b is not n-bound to C but becomes n-bound
// once the optimal solution of phi is added to C.
//
// For set independence only subsets S of B\C with |S| <= n-1 need checking: a
// witness X for K_n(b/AC) meets AC, so S = X n b has at most n-1 elements,
// still satisfies K_n(S/AC), and K_n(S/C) would give K_n(b/C).

#include "henson/formula.hpp"
#include "henson/graph.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace henson {

struct BoundWitness {
    VertexSet members;
    friend auto operator==(const BoundWitness&, const BoundWitness&) -> bool = default;
};

namespace detail {

/// Calls fn on every k-subset of `items` in lexicographic order; stops when fn returns true.
template <typename Fn>
auto for_each_subset(const VertexSet& items, std::size_t k, Fn&& fn) -> bool
{
    if (k > items.size())
        return false;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i)
        idx[i] = i;
    VertexSet pick(k);
    while (true) {
        for (std::size_t i = 0; i < k; ++i)
            pick[i] = items[idx[i]];
        if (fn(static_cast<const VertexSet&>(pick)))
            return true;
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == items.size() - k + i - 1)
            --i;
        if (i == 0)
            return false;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j)
            idx[j] = idx[j - 1] + 1;
    }
}

/// Subsets of `items` with 1 <= size <= max_size, by size then lexicographically.
template <typename Fn>
auto for_each_small_subset(const VertexSet& items, std::size_t max_size, Fn&& fn) -> bool
{
    for (std::size_t k = 1; k <= std::min(max_size, items.size()); ++k)
        if (for_each_subset(items, k, fn))
            return true;
    return false;
}

} // namespace detail

/// Lexicographically least witness of K_n(B/C), if any.
inline auto kn_bound(const VertexSet& B, const VertexSet& C, const Graph& g, int n) -> std::optional<BoundWitness>
{
    if (n < 2)
        throw PreconditionError("n must be at least 2");
    if (!set_intersection(B, C).empty())
        throw PreconditionError("kn_bound needs disjoint sets");
    std::optional<VertexSet> best;
    // For a fixed B-part the least completion is the least clique in C, and
    // merging with a fixed set preserves lexicographic order of equal-size sets.
    detail::for_each_small_subset(B, static_cast<std::size_t>(n - 1), [&](const VertexSet& part) {
        VertexSet common = C;
        for (auto b : part) {
            if (common.empty())
                break;
            common = set_intersection(common, g.neighbours(b));
        }
        auto need = static_cast<std::size_t>(n) - part.size();
        if (common.size() < need)
            return false;
        auto clique = find_clique_within(g, common, need);
        if (!clique)
            return false;
        auto cand = set_union(part, clique->members);
        if (!best || cand < *best)
            best = std::move(cand);
        return false;
    });
    if (!best)
        return std::nullopt;
    return BoundWitness{*best};
}

struct PhiBoundWitness {
    /// The subset B of the parameter tuple.
    VertexSet subset;
    /// Witness of K_n(B / C u a) against the optimal solution a.
    BoundWitness against_optimal;
    /// Vertices standing for the optimal solution inside `extension`.
    Tuple optimal_solution;
    Graph extension;
};

namespace detail {

inline void require_outside_base(std::span<const Vertex> b, const VertexSet& base)
{
    for (auto v : b)
        if (contains(base, v))
            throw PreconditionError("parameter " + std::to_string(v) + " lies in the base C");
}

} // namespace detail

namespace detail {

inline auto kphi_search(std::span<const Vertex> b, const PointedGraph& g, int n, const OptimalCandidate& cand)
    -> std::optional<PhiBoundWitness>
{
    auto with_solution = set_union(g.base, cand.new_vertices);
    std::optional<PhiBoundWitness> out;
    for_each_small_subset(make_set(Tuple(b.begin(), b.end())), static_cast<std::size_t>(n - 1),
        [&](const VertexSet& part) {
            if (kn_bound(part, g.base, g.graph, n))
                return false;
            auto w = kn_bound(part, with_solution, cand.extension, n);
            if (!w)
                return false;
            out = PhiBoundWitness{part, *w, cand.solution, cand.extension};
            return true;
        });
    return out;
}

} // namespace detail

/// Searches B within b (0 < |B| < n, by size then lexicographically) with
/// not K_n(B/C) and K_n(B / C u a) for the optimal solution a.
inline auto kphi_bound(const ConjFormula& f, std::span<const Vertex> b, const PointedGraph& g, int n)
    -> std::optional<PhiBoundWitness>
{
    if (validate(f) != FormulaClass::LR)
        throw FormulaError("K_n^phi is defined for equality-free formulas");
    detail::require_outside_base(b, g.base);
    auto p = instantiate(f, b, g);
    if (!is_consistent(p, g.graph, n, Theory::Tn))
        throw PreconditionError("formula instance is inconsistent");
    return detail::kphi_search(b, g, n, optimal_candidate(p, g.graph));
}

enum class DividesReason : std::uint8_t { Inconsistent, EqualityConjunct, KnPhiBound, None };

inline auto to_string(DividesReason r) -> std::string
{
    switch (r) {
    case DividesReason::Inconsistent: return "inconsistent";
    case DividesReason::EqualityConjunct: return "equality-conjunct";
    case DividesReason::KnPhiBound: return "kn-phi-bound";
    case DividesReason::None: return "none";
    }
    return "none";
}

struct DividesVerdict {
    bool divides = false;
    DividesReason reason = DividesReason::None;
    std::optional<PhiBoundWitness> witness{};
    std::optional<Literal> equality{};
    std::optional<std::string> detail{};
};

inline auto divides_formula(const ConjFormula& f, std::span<const Vertex> b, const PointedGraph& g, int n)
    -> DividesVerdict
{
    auto cls = validate(f);
    detail::require_outside_base(b, g.base);
    auto p = instantiate(f, b, g);
    if (p.contradictory()) {
        DividesVerdict v{.divides = true, .reason = DividesReason::Inconsistent};
        v.detail = *p.contradiction();
        return v;
    }
    auto cand = optimal_candidate(p, g.graph);
    if (!candidate_kn_free(cand, n)) {
        DividesVerdict v{.divides = true, .reason = DividesReason::Inconsistent};
        v.detail = "optimal solution completes a K_" + std::to_string(n);
        return v;
    }
    if (cls == FormulaClass::L0) {
        DividesVerdict v{.divides = true, .reason = DividesReason::EqualityConjunct};
        v.equality = f.equalities().front();
        return v;
    }
    if (auto w = detail::kphi_search(b, g, n, cand))
        return {.divides = true, .reason = DividesReason::KnPhiBound, .witness = std::move(w)};
    return {};
}

/// Dividing of a proper disjunction is not characterized; a single disjunct delegates.
inline auto divides_formula(const Disjunction& d, std::span<const Vertex> b, const PointedGraph& g, int n)
    -> DividesVerdict
{
    if (d.disjuncts.size() == 1)
        return divides_formula(d.disjuncts.front(), b, g, n);
    for (const auto& f : d.disjuncts)
        validate(f);
    detail::require_outside_base(b, g.base);
    DividesVerdict v;
    v.detail = "dividing of disjunctions is not decided by the graph criterion";
    return v;
}

/// Random-graph baseline: only an x = y conjunct makes a consistent instance divide.
inline auto divides_formula_T0(const ConjFormula& f, std::span<const Vertex> b, const PointedGraph& g)
    -> DividesVerdict
{
    auto cls = validate(f);
    detail::require_outside_base(b, g.base);
    auto p = instantiate(f, b, g);
    if (p.contradictory()) {
        DividesVerdict v{.divides = true, .reason = DividesReason::Inconsistent};
        v.detail = *p.contradiction();
        return v;
    }
    if (cls == FormulaClass::L0) {
        DividesVerdict v{.divides = true, .reason = DividesReason::EqualityConjunct};
        v.equality = f.equalities().front();
        return v;
    }
    return {};
}

struct IndependenceResult {
    bool independent = true;
    /// A vertex of (A n B) \ C.
    std::optional<Vertex> shared{};
    /// S within B\C with K_n(S/AC) but not K_n(S/C).
    std::optional<VertexSet> subset{};
    std::optional<BoundWitness> witness{};
};

inline auto dividing_indep(const VertexSet& A, const VertexSet& B, const VertexSet& C, const Graph& g, int n)
    -> IndependenceResult
{
    auto shared = set_difference(set_intersection(A, B), C);
    if (!shared.empty())
        return {.independent = false, .shared = shared.front()};
    auto ac = set_union(A, C);
    IndependenceResult out;
    detail::for_each_small_subset(set_difference(B, C), static_cast<std::size_t>(n - 1), [&](const VertexSet& s) {
        auto w = kn_bound(s, ac, g, n);
        if (!w || kn_bound(s, C, g, n))
            return false;
        out = {.independent = false, .subset = s, .witness = *w};
        return true;
    });
    return out;
}

/// Forking and dividing independence coincide for complete types.
inline auto forking_indep(const VertexSet& A, const VertexSet& B, const VertexSet& C, const Graph& g, int n)
    -> IndependenceResult
{
    return dividing_indep(A, B, C, g, n);
}

inline auto edge_indep(const VertexSet& A, const VertexSet& B, const VertexSet& C, const Graph& g) -> bool
{
    if (!set_difference(set_intersection(A, B), C).empty())
        return false;
    auto b_rest = set_difference(B, C);
    for (auto a : set_difference(A, C))
        for (auto b : b_rest)
            if (g.adjacent(a, b))
                return false;
    return true;
}

struct FullExistence {
    Graph graph;
    /// A in ascending order.
    Tuple original;
    /// The copy, aligned with `original`: base vertices stay, the rest are fresh.
    Tuple copy;
};

/// Copies A\C to fresh vertices that keep their edges to each other and to C
/// and have no other edges. The copy realizes the type of A over C and is
/// edge-independent from B over C; the extension stays K_n-free.
inline auto full_existence(const VertexSet& A, const VertexSet& B, const VertexSet& C, const Graph& g, int n)
    -> FullExistence
{
    (void)n;
    (void)B;
    FullExistence out{g, A, {}};
    Vertex next = g.max_vertex() ? *g.max_vertex() + 1 : 0;
    std::vector<std::pair<Vertex, Vertex>> copies;
    for (auto a : A) {
        if (!g.has_vertex(a))
            throw PreconditionError("unknown vertex " + std::to_string(a));
        if (contains(C, a)) {
            out.copy.push_back(a);
            continue;
        }
        out.graph.add_vertex(next);
        copies.emplace_back(a, next);
        out.copy.push_back(next);
        ++next;
    }
    for (std::size_t i = 0; i < copies.size(); ++i) {
        for (std::size_t j = i + 1; j < copies.size(); ++j)
            if (g.adjacent(copies[i].first, copies[j].first))
                out.graph.add_edge(copies[i].second, copies[j].second);
        for (auto c : C)
            if (g.adjacent(copies[i].first, c))
                out.graph.add_edge(copies[i].second, c);
    }
    return out;
}

struct DisjunctionForking {
    /// True: every disjunct divides, so the disjunction forks. False: undetermined.
    bool forks = false;
    std::vector<DividesVerdict> verdicts;
};

inline auto forks_disjunction(const Disjunction& d, std::span<const Vertex> b, const PointedGraph& g, int n)
    -> DisjunctionForking
{
    DisjunctionForking out;
    out.forks = !d.disjuncts.empty();
    for (const auto& f : d.disjuncts) {
        out.verdicts.push_back(divides_formula(f, b, g, n));
        out.forks = out.forks && out.verdicts.back().divides;
    }
    return out;
}

} // namespace henson
