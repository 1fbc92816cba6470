#pragma once

// Uniform indiscernible sequences over a base set C, described by templates.
//
// In a binary language the type of any increasing run of copies over C is
// fixed by the type of one copy and the edges between two copies, so a
// template is: which positions repeat one vertex forever (constant columns)
// and the cross pattern, a set of ordered position pairs (i, j) meaning
// b^k_i R b^l_j for every k < l. A K_n touches at most n copies and the edge
// rule only depends on index order, so a template is realizable in the
// K_n-free theory iff its n-copy window is K_n-free.

#include "henson/formula.hpp"
#include "henson/graph.hpp"
#include "henson/independence.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace henson {

/// Positions are 0-based. Cross pairs only involve non-constant positions.
struct SequenceTemplate {
    int positions = 0;
    std::vector<int> constant;
    std::vector<std::pair<int, int>> cross;

    [[nodiscard]] auto is_constant(int i) const -> bool
    {
        return std::find(constant.begin(), constant.end(), i) != constant.end();
    }

    void validate() const
    {
        if (positions < 0)
            throw PreconditionError("template has negative arity");
        for (auto i : constant)
            if (i < 0 || i >= positions)
                throw PreconditionError("constant position out of range");
        for (auto [i, j] : cross) {
            if (i < 0 || i >= positions || j < 0 || j >= positions)
                throw PreconditionError("cross position out of range");
            if (is_constant(i) || is_constant(j))
                throw PreconditionError("constant positions carry no cross entries");
        }
    }

    void normalize()
    {
        std::sort(constant.begin(), constant.end());
        constant.erase(std::unique(constant.begin(), constant.end()), constant.end());
        std::sort(cross.begin(), cross.end());
        cross.erase(std::unique(cross.begin(), cross.end()), cross.end());
    }

    friend auto operator==(const SequenceTemplate&, const SequenceTemplate&) -> bool = default;
};

inline auto to_string(const SequenceTemplate& t) -> std::string
{
    std::string out = "positions=" + std::to_string(t.positions) + " constant={";
    for (std::size_t k = 0; k < t.constant.size(); ++k)
        out += (k ? "," : "") + std::to_string(t.constant[k] + 1);
    out += "} cross={";
    for (std::size_t k = 0; k < t.cross.size(); ++k)
        out += (k ? "," : "") + std::string("(") + std::to_string(t.cross[k].first + 1) + ","
            + std::to_string(t.cross[k].second + 1) + ")";
    return out + "}";
}

/// C plus the first L copies of a sequence; copies[0] is the original tuple.
struct SequenceWindow {
    Graph graph;
    VertexSet base;
    std::vector<Tuple> copies;
};

/// Copy l >= 1, position i gets id offset + (l-1)*k + i, where offset is one
/// past the largest vertex of g; constant positions keep the original vertex.
inline auto realize_template(const SequenceTemplate& t, const VertexSet& C, std::span<const Vertex> b,
    const Graph& g, int length) -> SequenceWindow
{
    t.validate();
    if (static_cast<int>(b.size()) != t.positions)
        throw PreconditionError("template arity differs from the tuple length");
    if (length < 1)
        throw PreconditionError("window length must be positive");
    detail::require_outside_base(b, C);
    auto k = static_cast<std::size_t>(t.positions);
    Tuple base_tuple(b.begin(), b.end());

    SequenceWindow w;
    w.base = C;
    w.graph = g.induced(set_union(C, make_set(base_tuple)));
    w.graph.reserve(w.graph.size() + k * static_cast<std::size_t>(length - 1));
    Vertex offset = g.max_vertex() ? *g.max_vertex() + 1 : 0;
    std::vector<bool> constant(k, false);
    for (auto i : t.constant)
        constant[static_cast<std::size_t>(i)] = true;

    w.copies.push_back(base_tuple);
    for (int l = 1; l < length; ++l) {
        Tuple copy(k);
        for (std::size_t i = 0; i < k; ++i) {
            copy[i] = constant[i] ? b[i] : offset + static_cast<Vertex>(static_cast<std::size_t>(l - 1) * k + i);
            if (!constant[i])
                w.graph.add_vertex(copy[i]);
        }
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = i + 1; j < k; ++j)
                if (g.adjacent(b[i], b[j]))
                    w.graph.add_edge(copy[i], copy[j]);
            if (!constant[i])
                for (auto c : C)
                    if (g.adjacent(b[i], c))
                        w.graph.add_edge(copy[i], c);
        }
        w.copies.push_back(std::move(copy));
    }
    for (std::size_t m = 1; m < w.copies.size(); ++m)
        for (std::size_t l = 0; l < m; ++l)
            for (auto [i, j] : t.cross)
                w.graph.add_edge(w.copies[l][static_cast<std::size_t>(i)], w.copies[m][static_cast<std::size_t>(j)]);
    return w;
}

/// Cross edges b^l_i R b^m_j exactly when l < m, i < j and both b_i, b_j lie in B.
inline auto gamma_template(std::span<const Vertex> b, const VertexSet& B) -> SequenceTemplate
{
    SequenceTemplate t;
    t.positions = static_cast<int>(b.size());
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = i + 1; j < b.size(); ++j)
            if (contains(B, b[i]) && contains(B, b[j]))
                t.cross.emplace_back(static_cast<int>(i), static_cast<int>(j));
    return t;
}

inline auto gamma(const VertexSet& C, std::span<const Vertex> b, const VertexSet& B, const Graph& g, int length)
    -> SequenceWindow
{
    for (auto v : B)
        if (std::find(b.begin(), b.end(), v) == b.end())
            throw PreconditionError("gamma subset must lie inside the tuple");
    return realize_template(gamma_template(b, B), C, b, g, length);
}

inline auto is_template_valid(const SequenceTemplate& t, const VertexSet& C, std::span<const Vertex> b,
    const Graph& g, int n) -> bool
{
    return is_kn_free(realize_template(t, C, b, g, n).graph, n);
}

/// Whether the first k instances of f along the window are jointly inconsistent.
inline auto check_k_inconsistent(const ConjFormula& f, const SequenceWindow& w, int k, int n,
    Theory theory = Theory::Tn) -> bool
{
    if (k < 1 || k > static_cast<int>(w.copies.size()))
        throw PreconditionError("width must lie between 1 and the window length");
    std::vector<Instance> instances;
    for (int l = 0; l < k; ++l)
        instances.push_back({&f, w.copies[static_cast<std::size_t>(l)]});
    return !is_consistent(instantiate_instances(instances, w.graph), w.graph, n, theory);
}

inline constexpr int default_max_template_positions = 6;

/// Every constant-column choice (mask ascending) times every cross pattern
/// over the remaining positions (mask ascending, pairs row-major). Under Tn
/// only templates with a K_n-free n-copy window are passed on. fn returns
/// true to stop; the return value says whether it stopped early.
template <typename Fn>
auto for_each_template(const VertexSet& C, std::span<const Vertex> b, const Graph& g, int n, Theory theory, Fn&& fn,
    int max_positions = default_max_template_positions) -> bool
{
    auto k = static_cast<int>(b.size());
    if (k > max_positions)
        throw PreconditionError("template enumeration is capped at " + std::to_string(max_positions) + " positions");
    for (std::uint32_t cmask = 0; cmask < (1U << k); ++cmask) {
        SequenceTemplate base;
        base.positions = k;
        std::vector<int> free;
        for (int i = 0; i < k; ++i) {
            if (cmask & (1U << i))
                base.constant.push_back(i);
            else
                free.push_back(i);
        }
        auto m = free.size();
        std::vector<std::pair<int, int>> pairs;
        for (auto i : free)
            for (auto j : free)
                pairs.emplace_back(i, j);
        for (std::uint64_t xmask = 0; xmask < (std::uint64_t{1} << (m * m)); ++xmask) {
            SequenceTemplate t = base;
            for (std::size_t p = 0; p < pairs.size(); ++p)
                if (xmask & (std::uint64_t{1} << p))
                    t.cross.push_back(pairs[p]);
            if (theory == Theory::Tn && !is_template_valid(t, C, b, g, n))
                continue;
            if (fn(static_cast<const SequenceTemplate&>(t)))
                return true;
        }
    }
    return false;
}

inline auto enumerate_templates(const VertexSet& C, std::span<const Vertex> b, const Graph& g, int n,
    Theory theory = Theory::Tn) -> std::vector<SequenceTemplate>
{
    std::vector<SequenceTemplate> out;
    for_each_template(C, b, g, n, theory, [&](const SequenceTemplate& t) {
        out.push_back(t);
        return false;
    });
    return out;
}

namespace detail {

/// Columns i and j of the window together span no edge.
inline auto columns_edge_free(const SequenceWindow& w, std::size_t i, std::size_t j) -> bool
{
    std::vector<Vertex> cols;
    for (const auto& copy : w.copies) {
        cols.push_back(copy[i]);
        cols.push_back(copy[j]);
    }
    auto s = make_set(std::move(cols));
    for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t c = a + 1; c < s.size(); ++c)
            if (w.graph.adjacent(s[a], s[c]))
                return false;
    return true;
}

inline auto edge_free_column_pair(const SequenceWindow& w, int positions) -> std::optional<std::pair<int, int>>
{
    for (int i = 0; i < positions; ++i)
        for (int j = i + 1; j < positions; ++j)
            if (columns_edge_free(w, static_cast<std::size_t>(i), static_cast<std::size_t>(j)))
                return std::pair{i, j};
    return std::nullopt;
}

} // namespace detail

struct Lemma61Report {
    std::uint64_t total = 0;
    /// Some two columns are jointly edge-free.
    std::uint64_t edge_free_pair = 0;
    /// No such pair, and the window contains a triangle.
    std::uint64_t triangle = 0;
    std::uint64_t violations = 0;
    std::optional<SequenceTemplate> counterexample;
    int copies = 0;
};

/// Four edge-free positions over an empty base: every template either has two
/// jointly edge-free columns or a triangle in its window.
inline auto lemma61_scan(int copies = 6) -> Lemma61Report
{
    Lemma61Report r;
    r.copies = copies;
    Graph g(VertexSet{0, 1, 2, 3});
    const Tuple b{0, 1, 2, 3};
    for_each_template({}, b, g, 3, Theory::T0, [&](const SequenceTemplate& t) {
        ++r.total;
        auto w = realize_template(t, {}, b, g, copies);
        if (detail::edge_free_column_pair(w, 4)) {
            ++r.edge_free_pair;
        } else if (find_clique(w.graph, 3)) {
            ++r.triangle;
        } else {
            ++r.violations;
            if (!r.counterexample)
                r.counterexample = t;
        }
        return false;
    });
    return r;
}

struct Example62 {
    int n = 3;
    PointedGraph graph;
    Tuple b;
    Disjunction phi;
};

/// C a clique on n-3 vertices, four pairwise non-adjacent b's joined to all of
/// C, and the disjunction over i < j of "x R C b_i b_j".
inline auto build_example_62(int n) -> Example62
{
    if (n < 3)
        throw PreconditionError("n must be at least 3");
    Example62 ex;
    ex.n = n;
    auto& g = ex.graph.graph;
    auto csize = n - 3;
    for (Vertex v = 0; v < csize + 4; ++v)
        g.add_vertex(v);
    for (Vertex c = 0; c < csize; ++c) {
        ex.graph.base.push_back(c);
        for (Vertex d = c + 1; d < csize; ++d)
            g.add_edge(c, d);
    }
    for (Vertex i = 0; i < 4; ++i) {
        Vertex v = csize + i;
        ex.b.push_back(v);
        for (auto c : ex.graph.base)
            g.add_edge(v, c);
    }
    ex.graph.tuples["b"] = ex.b;
    ex.graph.sets["C"] = ex.graph.base;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            std::vector<Literal> lits{Literal::edge(Term::x(0), Term::y(i)), Literal::edge(Term::x(0), Term::y(j))};
            for (auto c : ex.graph.base)
                lits.push_back(Literal::edge(Term::x(0), Term::c(c)));
            ex.phi.disjuncts.emplace_back(1, 4, std::move(lits));
        }
    return ex;
}

struct Example62Report {
    int n = 0;
    int l_max = 0;
    int disjuncts = 0;
    int dividing_disjuncts = 0;
    bool forks = false;
    std::uint64_t templates_checked = 0;
    std::uint64_t violations = 0;
    bool nondividing = false;
    std::optional<SequenceTemplate> counterexample;
};

/// Forking: every disjunct divides by the graph criterion. Non-dividing: every
/// valid template has two jointly edge-free columns (i, j), and x R C b^l_i b^l_j
/// for all l < l_max is consistent along its window.
inline auto verify_example_62(const Example62& ex, int l_max) -> Example62Report
{
    const int n = ex.n;
    const auto& g = ex.graph.graph;
    const auto& C = ex.graph.base;
    if (n < 3)
        throw PreconditionError("n must be at least 3");
    if (l_max < 1)
        throw PreconditionError("window length must be positive");
    if (static_cast<int>(C.size()) != n - 3 || find_clique_within(g, C, C.size()) == std::nullopt)
        throw PreconditionError("base must be a clique on n-3 vertices");
    if (ex.b.size() != 4)
        throw PreconditionError("tuple must have four entries");
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j)
            if (g.adjacent(ex.b[i], ex.b[j]))
                throw PreconditionError("tuple entries must be pairwise non-adjacent");
        for (auto c : C)
            if (!g.adjacent(ex.b[i], c))
                throw PreconditionError("every tuple entry must be joined to the base");
    }
    if (!is_kn_free(g, n))
        throw PreconditionError("ambient graph contains K_n");

    // Disjunct for each pair of positions, read off its positive x-y conjuncts.
    std::map<std::pair<int, int>, const ConjFormula*> by_pair;
    for (const auto& f : ex.phi.disjuncts) {
        std::vector<int> ys;
        for (const auto& l : f.conjuncts())
            if (l.kind == LiteralKind::Edge && l.rhs.kind == TermKind::Y)
                ys.push_back(static_cast<int>(l.rhs.index));
        if (ys.size() == 2)
            by_pair[{ys[0], ys[1]}] = &f;
    }
    if (by_pair.size() != 6)
        throw PreconditionError("disjunction must have one disjunct per pair of positions");

    Example62Report r;
    r.n = n;
    r.l_max = l_max;
    r.disjuncts = static_cast<int>(ex.phi.disjuncts.size());
    for (const auto& f : ex.phi.disjuncts) {
        auto v = divides_formula(f, ex.b, ex.graph, n);
        if (v.divides && v.reason == DividesReason::KnPhiBound)
            ++r.dividing_disjuncts;
    }
    r.forks = r.dividing_disjuncts == r.disjuncts;

    for_each_template(C, ex.b, g, n, Theory::Tn, [&](const SequenceTemplate& t) {
        ++r.templates_checked;
        auto w = realize_template(t, C, ex.b, g, l_max);
        auto pair = detail::edge_free_column_pair(w, 4);
        bool ok = false;
        if (pair) {
            const auto* f = by_pair.at(*pair);
            std::vector<Instance> instances;
            for (const auto& copy : w.copies)
                instances.push_back({f, copy});
            ok = is_consistent(instantiate_instances(instances, w.graph), w.graph, n, Theory::Tn);
        }
        if (!ok) {
            ++r.violations;
            if (!r.counterexample)
                r.counterexample = t;
        }
        return false;
    });
    r.nondividing = r.violations == 0;
    return r;
}

inline auto verify_example_62(int n, int l_max) -> Example62Report
{
    return verify_example_62(build_example_62(n), l_max);
}

} // namespace henson
