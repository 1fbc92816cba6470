#pragma once

// Definition-level dividing check. A formula instance divides over C when some
// C-indiscernible sequence starting at b makes its instances jointly
// inconsistent. The oracle walks every realizable sequence template over the
// type of b, materializes l_max copies, and tests the union of instances for
// consistency through the optimal candidate. It shares no code with the
// n-bound criterion beyond graphs, instantiation and clique search.
//
// A complete type over C u b divides iff its full quantifier-free diagram does:
// a stronger formula divides along any sequence a weaker one does, and the
// diagram implies every formula of the type.

#include "henson/formula.hpp"
#include "henson/graph.hpp"
#include "henson/sequence.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

namespace henson {

struct OracleVerdict {
    bool divides = false;
    std::optional<SequenceTemplate> witness;
    /// Least number of copies whose instances are already inconsistent.
    std::optional<int> k;
    int l_max = 0;
    std::uint64_t templates = 0;
};

struct OracleLimits {
    int max_positions = default_max_template_positions;
    int max_base = 4;
    /// Skip the bitmask evaluator and always go through instantiate/is_consistent.
    bool force_generic = false;
};

inline auto default_l_max(int n) -> int { return n + 1; }

class TemplateOracle {
public:
    TemplateOracle(const Graph& g, VertexSet base, Tuple b, int n, Theory theory, int l_max, OracleLimits limits = {})
        : base_(std::move(base)), b_(std::move(b)), n_(n), theory_(theory), l_max_(l_max), limits_(limits)
    {
        if (l_max_ < 1)
            throw PreconditionError("l_max must be positive");
        if (theory_ == Theory::Tn && n_ < 2)
            throw PreconditionError("n must be at least 2");
        if (static_cast<int>(base_.size()) > limits_.max_base)
            throw PreconditionError("oracle base is capped at " + std::to_string(limits_.max_base) + " vertices");
        detail::require_outside_base(b_, base_);
        if (make_set(b_).size() != b_.size())
            throw PreconditionError("parameter tuple repeats a vertex");
        for_each_template(
            base_, b_, g, n_, theory_,
            [&](const SequenceTemplate& t) {
                templates_.push_back(t);
                windows_.push_back(realize_template(t, base_, b_, g, l_max_));
                compact_.push_back(make_compact(windows_.back()));
                return false;
            },
            limits_.max_positions);
    }

    [[nodiscard]] auto templates() const -> const std::vector<SequenceTemplate>& { return templates_; }
    [[nodiscard]] auto window(std::size_t i) const -> const SequenceWindow& { return windows_[i]; }
    [[nodiscard]] auto l_max() const -> int { return l_max_; }

    [[nodiscard]] auto find(const SequenceTemplate& t) const -> std::optional<std::size_t>
    {
        auto it = std::find(templates_.begin(), templates_.end(), t);
        if (it == templates_.end())
            return std::nullopt;
        return static_cast<std::size_t>(it - templates_.begin());
    }

    /// The instance at b itself is consistent.
    [[nodiscard]] auto consistent(const ConjFormula& f) const -> bool
    {
        if (templates_.empty())
            throw HensonError("no realizable template: the base type is not K_n-free");
        return !inconsistent_at(f, 0, 1);
    }

    /// Instances along the first k copies of template i are jointly inconsistent.
    [[nodiscard]] auto inconsistent_at(const ConjFormula& f, std::size_t i, int k) const -> bool
    {
        check_formula(f);
        if (i >= templates_.size() || k < 1 || k > l_max_)
            throw PreconditionError("template index or width out of range");
        return inconsistent_unchecked(f, i, k);
    }

    [[nodiscard]] auto divides(const ConjFormula& f) const -> OracleVerdict
    {
        if (!consistent(f))
            throw PreconditionError("formula instance is inconsistent");
        OracleVerdict v;
        v.l_max = l_max_;
        for (std::size_t i = 0; i < templates_.size(); ++i) {
            ++v.templates;
            if (!inconsistent_unchecked(f, i, l_max_))
                continue;
            int k = 2;
            while (k < l_max_ && !inconsistent_unchecked(f, i, k))
                ++k;
            v.divides = true;
            v.witness = templates_[i];
            v.k = k;
            return v;
        }
        return v;
    }

    /// A disjunction divides along a template when every choice of one
    /// disjunct per copy is inconsistent.
    [[nodiscard]] auto divides(const Disjunction& d) const -> OracleVerdict
    {
        if (d.disjuncts.empty())
            throw PreconditionError("empty disjunction");
        for (const auto& f : d.disjuncts)
            check_formula(f);
        if (templates_.empty())
            throw HensonError("no realizable template: the base type is not K_n-free");
        if (!some_choice_consistent(d, 0, 1))
            throw PreconditionError("formula instance is inconsistent");
        OracleVerdict v;
        v.l_max = l_max_;
        for (std::size_t i = 0; i < templates_.size(); ++i) {
            ++v.templates;
            if (some_choice_consistent(d, i, l_max_))
                continue;
            int k = 2;
            while (k < l_max_ && some_choice_consistent(d, i, k))
                ++k;
            v.divides = true;
            v.witness = templates_[i];
            v.k = k;
            return v;
        }
        return v;
    }

private:
    static constexpr std::size_t max_compact_x = 16;

    struct Compact {
        bool fits = false;
        int size = 0;
        std::vector<std::uint64_t> adj;
        std::vector<std::vector<int>> columns;
    };

    [[nodiscard]] static auto make_compact(const SequenceWindow& w) -> Compact
    {
        Compact c;
        c.size = static_cast<int>(w.graph.size());
        if (c.size > 64)
            return c;
        c.adj.assign(static_cast<std::size_t>(c.size), 0);
        for (int u = 0; u < c.size; ++u)
            c.adj[static_cast<std::size_t>(u)] = w.graph.row(static_cast<std::size_t>(u))[0];
        for (const auto& copy : w.copies) {
            std::vector<int> col;
            for (auto v : copy)
                col.push_back(static_cast<int>(*w.graph.index_of(v)));
            c.columns.push_back(std::move(col));
        }
        c.fits = true;
        return c;
    }

    [[nodiscard]] auto inconsistent_unchecked(const ConjFormula& f, std::size_t i, int k) const -> bool
    {
        std::vector<std::pair<const ConjFormula*, int>> chosen;
        chosen.reserve(static_cast<std::size_t>(k));
        for (int l = 0; l < k; ++l)
            chosen.emplace_back(&f, l);
        return !union_consistent(chosen, i);
    }

    void check_formula(const ConjFormula& f) const
    {
        validate(f);
        if (f.y_arity() != static_cast<int>(b_.size()))
            throw PreconditionError("parameter tuple length differs from y arity");
        for (auto c : f.constants())
            if (!contains(base_, c))
                throw PreconditionError("constant " + std::to_string(c) + " is not in the base");
    }

    [[nodiscard]] auto some_choice_consistent(const Disjunction& d, std::size_t i, int k) const -> bool
    {
        std::vector<std::pair<const ConjFormula*, int>> chosen;
        auto search = [&](auto&& self, int l) -> bool {
            if (l == k)
                return true;
            for (const auto& f : d.disjuncts) {
                chosen.emplace_back(&f, l);
                if (union_consistent(chosen, i) && self(self, l + 1))
                    return true;
                chosen.pop_back();
            }
            return false;
        };
        return search(search, 0);
    }

    [[nodiscard]] auto union_consistent(const std::vector<std::pair<const ConjFormula*, int>>& chosen,
        std::size_t i) const -> bool
    {
        const auto& c = compact_[i];
        auto xa = static_cast<std::size_t>(chosen.front().first->x_arity());
        if (limits_.force_generic || !c.fits || xa > max_compact_x || c.size + static_cast<int>(xa) > 64)
            return generic_consistent(chosen, i);
        return compact_consistent(chosen, c, windows_[i].graph, xa);
    }

    [[nodiscard]] auto generic_consistent(const std::vector<std::pair<const ConjFormula*, int>>& chosen,
        std::size_t i) const -> bool
    {
        const auto& w = windows_[i];
        std::vector<Instance> instances;
        for (auto [f, l] : chosen)
            instances.push_back({f, w.copies[static_cast<std::size_t>(l)]});
        return is_consistent(instantiate_instances(instances, w.graph), w.graph, n_, theory_);
    }

    [[nodiscard]] auto compact_consistent(const std::vector<std::pair<const ConjFormula*, int>>& chosen,
        const Compact& c, const Graph& wg, std::size_t xa) const -> bool
    {
        const int size = c.size;
        std::array<int, max_compact_x> ident{};
        ident.fill(-1);
        for (auto [f, l] : chosen)
            for (const auto& lit : f->conjuncts()) {
                if (lit.kind != LiteralKind::Eq)
                    continue;
                auto& slot = ident[static_cast<std::size_t>(lit.lhs.index)];
                int v = c.columns[static_cast<std::size_t>(l)][static_cast<std::size_t>(lit.rhs.index)];
                if (slot >= 0 && slot != v)
                    return false;
                slot = v;
            }

        std::array<std::uint64_t, max_compact_x> pos{};
        std::array<std::uint64_t, max_compact_x> neg{};
        for (auto [f, l] : chosen) {
            const auto& col = c.columns[static_cast<std::size_t>(l)];
            auto resolve = [&](const Term& t) -> int {
                switch (t.kind) {
                case TermKind::X: {
                    int s = ident[static_cast<std::size_t>(t.index)];
                    return s >= 0 ? s : size + static_cast<int>(t.index);
                }
                case TermKind::Y: return col[static_cast<std::size_t>(t.index)];
                case TermKind::Const: return static_cast<int>(*wg.index_of(t.index));
                }
                return -1;
            };
            for (const auto& lit : f->conjuncts()) {
                if (lit.kind == LiteralKind::Eq)
                    continue;
                int a = resolve(lit.lhs);
                int b = resolve(lit.rhs);
                bool positive = lit.kind == LiteralKind::Edge;
                if (a < size && b < size) {
                    bool holds = a != b && ((c.adj[static_cast<std::size_t>(a)] >> b) & 1U);
                    if (holds != positive)
                        return false;
                    continue;
                }
                auto& mask = positive ? pos : neg;
                if (a >= size)
                    mask[static_cast<std::size_t>(a - size)] |= std::uint64_t{1} << b;
                if (b >= size)
                    mask[static_cast<std::size_t>(b - size)] |= std::uint64_t{1} << a;
            }
        }
        for (std::size_t x = 0; x < xa; ++x)
            if (pos[x] & neg[x])
                return false;
        if (theory_ == Theory::T0)
            return true;

        std::array<std::uint64_t, 64> adj{};
        std::copy(c.adj.begin(), c.adj.end(), adj.begin());
        for (std::size_t x = 0; x < xa; ++x) {
            if (ident[x] >= 0)
                continue;
            auto node = static_cast<std::size_t>(size) + x;
            adj[node] = pos[x];
            for (auto m = pos[x]; m; m &= m - 1)
                adj[static_cast<std::size_t>(std::countr_zero(m))] |= std::uint64_t{1} << node;
        }
        for (std::size_t x = 0; x < xa; ++x) {
            if (ident[x] >= 0)
                continue;
            if (has_clique(adj.data(), adj[static_cast<std::size_t>(size) + x], n_ - 1))
                return false;
        }
        return true;
    }

    static auto has_clique(const std::uint64_t* adj, std::uint64_t cand, int m) -> bool
    {
        if (m <= 0)
            return true;
        while (cand) {
            if (std::popcount(cand) < m)
                return false;
            int v = std::countr_zero(cand);
            cand &= cand - 1;
            if (has_clique(adj, cand & adj[v], m - 1))
                return true;
        }
        return false;
    }

    VertexSet base_;
    Tuple b_;
    int n_;
    Theory theory_;
    int l_max_;
    OracleLimits limits_;
    std::vector<SequenceTemplate> templates_;
    std::vector<SequenceWindow> windows_;
    std::vector<Compact> compact_;
};

inline auto divides_oracle(const ConjFormula& f, std::span<const Vertex> b, const PointedGraph& g, int n, int l_max,
    OracleLimits limits = {}) -> OracleVerdict
{
    TemplateOracle o(g.graph, g.base, Tuple(b.begin(), b.end()), n, Theory::Tn, l_max, limits);
    return o.divides(f);
}

inline auto divides_oracle(const Disjunction& d, std::span<const Vertex> b, const PointedGraph& g, int n, int l_max,
    OracleLimits limits = {}) -> OracleVerdict
{
    TemplateOracle o(g.graph, g.base, Tuple(b.begin(), b.end()), n, Theory::Tn, l_max, limits);
    return o.divides(d);
}

inline auto divides_oracle_T0(const ConjFormula& f, std::span<const Vertex> b, const PointedGraph& g, int l_max,
    OracleLimits limits = {}) -> OracleVerdict
{
    TemplateOracle o(g.graph, g.base, Tuple(b.begin(), b.end()), 0, Theory::T0, l_max, limits);
    return o.divides(f);
}

/// The full quantifier-free diagram of A\C over C u b, with b enumerating B\C.
struct TypeDiagram {
    Tuple realization;
    Tuple parameters;
    ConjFormula formula;
};

inline auto type_diagram(const VertexSet& A, const VertexSet& B, const VertexSet& C, const Graph& g) -> TypeDiagram
{
    TypeDiagram d;
    d.realization = set_difference(A, C);
    d.parameters = set_difference(B, C);
    auto rel = [&](Vertex u, Vertex v, Term s, Term t) {
        return g.adjacent(u, v) ? Literal::edge(s, t) : Literal::non_edge(s, t);
    };
    std::vector<Literal> lits;
    const auto& a = d.realization;
    const auto& b = d.parameters;
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto xi = Term::x(static_cast<int>(i));
        for (std::size_t j = i + 1; j < a.size(); ++j)
            lits.push_back(rel(a[i], a[j], xi, Term::x(static_cast<int>(j))));
        for (std::size_t j = 0; j < b.size(); ++j) {
            auto yj = Term::y(static_cast<int>(j));
            lits.push_back(a[i] == b[j] ? Literal::eq(xi, yj) : rel(a[i], b[j], xi, yj));
        }
        for (auto c : C)
            lits.push_back(rel(a[i], c, xi, Term::c(c)));
    }
    d.formula = ConjFormula(static_cast<int>(a.size()), static_cast<int>(b.size()), std::move(lits));
    return d;
}

/// Independence through the oracle: tp(A / BC) does not divide over C.
inline auto dividing_indep_oracle(const VertexSet& A, const VertexSet& B, const VertexSet& C, const Graph& g, int n,
    int l_max, OracleLimits limits = {}) -> bool
{
    auto d = type_diagram(A, B, C, g);
    if (d.realization.empty())
        return true;
    PointedGraph pg{g, C, {}, {}};
    return !divides_oracle(d.formula, d.parameters, pg, n, l_max, limits).divides;
}

} // namespace henson
