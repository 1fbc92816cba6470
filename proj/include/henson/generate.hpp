#pragma once

// Instance generators: exhaustive graph and formula grids, and seeded random
// sets and formulas for fuzzing.

#include "henson/formula.hpp"
#include "henson/graph.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

namespace henson {

/// Independent stream for trial i of a run seeded with `seed`.
inline auto trial_rng(std::uint64_t seed, std::uint64_t i) -> std::mt19937_64
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
    return std::mt19937_64(seq);
}

inline auto uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) -> std::int64_t
{
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

namespace detail {

inline auto vertex_pairs(const VertexSet& vs) -> std::vector<std::pair<Vertex, Vertex>>
{
    std::vector<std::pair<Vertex, Vertex>> out;
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j)
            out.emplace_back(vs[i], vs[j]);
    return out;
}

} // namespace detail

/// Every graph on `vertices`, edge sets in binary counting order over the
/// lexicographic pair list. fn returns true to stop.
template <typename Fn>
void for_each_graph(const VertexSet& vertices, Fn&& fn)
{
    auto pairs = detail::vertex_pairs(vertices);
    if (pairs.size() > 24)
        throw PreconditionError("graph grid too large");
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
        Graph g(vertices);
        for (std::size_t k = 0; k < pairs.size(); ++k)
            if ((mask >> k) & 1U)
                g.add_edge(pairs[k].first, pairs[k].second);
        if (fn(static_cast<const Graph&>(g)))
            return;
    }
}

/// Term pairs that involve at least one x, in a fixed order: x-x, then x-y, then x-c.
inline auto formula_slots(int xa, int ya, const VertexSet& C) -> std::vector<std::pair<Term, Term>>
{
    std::vector<std::pair<Term, Term>> slots;
    for (int i = 0; i < xa; ++i)
        for (int j = i + 1; j < xa; ++j)
            slots.emplace_back(Term::x(i), Term::x(j));
    for (int i = 0; i < xa; ++i)
        for (int j = 0; j < ya; ++j)
            slots.emplace_back(Term::x(i), Term::y(j));
    for (int i = 0; i < xa; ++i)
        for (auto c : C)
            slots.emplace_back(Term::x(i), Term::c(c));
    return slots;
}

namespace detail {

/// Slot index after swapping x1 and x2, or the same index for other slots.
inline auto swapped_slots(const std::vector<std::pair<Term, Term>>& slots) -> std::vector<std::size_t>
{
    auto swap_term = [](Term t) {
        if (t.kind == TermKind::X && t.index < 2)
            t.index = 1 - t.index;
        return t;
    };
    std::vector<std::size_t> out(slots.size());
    for (std::size_t k = 0; k < slots.size(); ++k) {
        auto a = swap_term(slots[k].first);
        auto b = swap_term(slots[k].second);
        if (b < a)
            std::swap(a, b);
        out[k] = static_cast<std::size_t>(
            std::find(slots.begin(), slots.end(), std::make_pair(a, b)) - slots.begin());
    }
    return out;
}

} // namespace detail

/// Every conjunction over the slots of formula_slots, each slot absent,
/// an edge or a non-edge (or, with `with_eq`, an x = y equality on x-y
/// slots). With two or more x's, a formula is skipped when swapping x1 and
/// x2 gives a smaller code. fn returns true to stop.
template <typename Fn>
void for_each_formula(int xa, int ya, const VertexSet& C, bool with_eq, Fn&& fn)
{
    auto slots = formula_slots(xa, ya, C);
    auto swap = detail::swapped_slots(slots);
    std::vector<int> radix(slots.size(), 3);
    if (with_eq)
        for (std::size_t k = 0; k < slots.size(); ++k)
            if (slots[k].second.kind == TermKind::Y)
                radix[k] = 4;
    std::vector<int> code(slots.size(), 0);
    std::vector<int> mirrored(slots.size(), 0);
    while (true) {
        bool keep = true;
        if (xa >= 2) {
            for (std::size_t k = 0; k < slots.size(); ++k)
                mirrored[swap[k]] = code[k];
            // Most significant digit last, matching the odometer below.
            for (std::size_t k = slots.size(); k-- > 0;) {
                if (mirrored[k] != code[k]) {
                    keep = code[k] < mirrored[k];
                    break;
                }
            }
        }
        if (keep) {
            std::vector<Literal> lits;
            for (std::size_t k = 0; k < slots.size(); ++k) {
                if (code[k] == 0)
                    continue;
                auto kind = code[k] == 1 ? LiteralKind::Edge : code[k] == 2 ? LiteralKind::NonEdge : LiteralKind::Eq;
                lits.push_back(Literal::make(kind, slots[k].first, slots[k].second));
            }
            ConjFormula f(xa, ya, std::move(lits));
            if (fn(static_cast<const ConjFormula&>(f)))
                return;
        }
        std::size_t k = 0;
        while (k < code.size() && ++code[k] == radix[k])
            code[k++] = 0;
        if (k == code.size())
            return;
    }
}

/// `count` distinct vertices drawn from `pool`, kept in draw order.
inline auto random_tuple(std::mt19937_64& rng, VertexSet pool, std::size_t count) -> Tuple
{
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(std::min(count, pool.size()));
    return pool;
}

inline auto random_subset(std::mt19937_64& rng, const VertexSet& pool, std::size_t max_size) -> VertexSet
{
    auto size = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(std::min(max_size, pool.size()))));
    return make_set(random_tuple(rng, pool, size));
}

struct LiteralMix {
    double edge = 0.45;
    double non_edge = 0.2;
    double eq = 0.0;
};

/// Each slot of formula_slots independently becomes an edge, non-edge or
/// equality (x-y slots only) with the given probabilities.
inline auto random_formula(std::mt19937_64& rng, int xa, int ya, const VertexSet& C, LiteralMix mix = {})
    -> ConjFormula
{
    std::vector<Literal> lits;
    for (auto [s, t] : formula_slots(xa, ya, C)) {
        auto u = unit_draw(rng);
        if (u < mix.edge)
            lits.push_back(Literal::edge(s, t));
        else if (u < mix.edge + mix.non_edge)
            lits.push_back(Literal::non_edge(s, t));
        else if (t.kind == TermKind::Y && u < mix.edge + mix.non_edge + mix.eq)
            lits.push_back(Literal::eq(s, t));
    }
    return {xa, ya, std::move(lits)};
}

} // namespace henson
