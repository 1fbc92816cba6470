#pragma once

// Conjunctions of (negated) atomic graph formulas in variables x1..xk and
// parameter variables y1..ym, with constants drawn from the base set. An
// instance of a formula at a parameter tuple becomes an RType: constraints on
// the still-free x variables against the ambient graph. Consistency is decided
// through the optimal candidate, the extension that adds exactly the edges the
// type asks for and nothing else.

#include "henson/graph.hpp"

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace henson {

class FormulaError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

enum class TermKind : std::uint8_t { X, Y, Const };

/// x and y terms carry a 0-based variable index; constants carry a vertex id.
struct Term {
    TermKind kind = TermKind::X;
    Vertex index = 0;

    static auto x(int i) -> Term { return {TermKind::X, i}; }
    static auto y(int j) -> Term { return {TermKind::Y, j}; }
    static auto c(Vertex v) -> Term { return {TermKind::Const, v}; }

    friend auto operator<=>(const Term&, const Term&) = default;
};

inline auto to_string(const Term& t) -> std::string
{
    switch (t.kind) {
    case TermKind::X: return "x" + std::to_string(t.index + 1);
    case TermKind::Y: return "y" + std::to_string(t.index + 1);
    case TermKind::Const: return "c:" + std::to_string(t.index);
    }
    return "?";
}

enum class LiteralKind : std::uint8_t { Edge, NonEdge, Eq };

/// Stored with lhs <= rhs, so a literal and its mirror image compare equal.
struct Literal {
    LiteralKind kind = LiteralKind::Edge;
    Term lhs;
    Term rhs;

    static auto make(LiteralKind k, Term a, Term b) -> Literal
    {
        if (b < a)
            std::swap(a, b);
        return {k, a, b};
    }
    static auto edge(Term a, Term b) -> Literal { return make(LiteralKind::Edge, a, b); }
    static auto non_edge(Term a, Term b) -> Literal { return make(LiteralKind::NonEdge, a, b); }
    static auto eq(Term a, Term b) -> Literal { return make(LiteralKind::Eq, a, b); }

    friend auto operator<=>(const Literal&, const Literal&) = default;
};

inline auto to_string(const Literal& l) -> std::string
{
    switch (l.kind) {
    case LiteralKind::Edge: return to_string(l.lhs) + " R " + to_string(l.rhs);
    case LiteralKind::NonEdge: return "not " + to_string(l.lhs) + " R " + to_string(l.rhs);
    case LiteralKind::Eq: return to_string(l.lhs) + " = " + to_string(l.rhs);
    }
    return "?";
}

enum class FormulaClass : std::uint8_t { L0, LR };

inline auto to_string(FormulaClass c) -> std::string { return c == FormulaClass::LR ? "LR" : "L0"; }

/// Conjunction in canonical form: literals oriented, sorted and deduplicated.
class ConjFormula {
public:
    ConjFormula() = default;

    ConjFormula(int x_arity, int y_arity, std::vector<Literal> conjuncts)
        : x_arity_(x_arity), y_arity_(y_arity)
    {
        for (auto& l : conjuncts)
            l = Literal::make(l.kind, l.lhs, l.rhs);
        std::sort(conjuncts.begin(), conjuncts.end());
        conjuncts.erase(std::unique(conjuncts.begin(), conjuncts.end()), conjuncts.end());
        conjuncts_ = std::move(conjuncts);
    }

    [[nodiscard]] auto x_arity() const -> int { return x_arity_; }
    [[nodiscard]] auto y_arity() const -> int { return y_arity_; }
    [[nodiscard]] auto conjuncts() const -> const std::vector<Literal>& { return conjuncts_; }

    [[nodiscard]] auto has(const Literal& l) const -> bool
    {
        auto c = Literal::make(l.kind, l.lhs, l.rhs);
        return std::binary_search(conjuncts_.begin(), conjuncts_.end(), c);
    }

    [[nodiscard]] auto constants() const -> VertexSet
    {
        std::vector<Vertex> out;
        for (const auto& l : conjuncts_)
            for (const auto& t : {l.lhs, l.rhs})
                if (t.kind == TermKind::Const)
                    out.push_back(t.index);
        return make_set(std::move(out));
    }

    /// Some pair carries both an edge and a non-edge literal.
    [[nodiscard]] auto contradictory() const -> bool { return contradiction().has_value(); }

    [[nodiscard]] auto contradiction() const -> std::optional<Literal>
    {
        for (const auto& l : conjuncts_)
            if (l.kind == LiteralKind::Edge && has(Literal::non_edge(l.lhs, l.rhs)))
                return l;
        return std::nullopt;
    }

    [[nodiscard]] auto equalities() const -> std::vector<Literal>
    {
        std::vector<Literal> out;
        for (const auto& l : conjuncts_)
            if (l.kind == LiteralKind::Eq)
                out.push_back(l);
        return out;
    }

    friend auto operator==(const ConjFormula&, const ConjFormula&) -> bool = default;

private:
    int x_arity_ = 1;
    int y_arity_ = 0;
    std::vector<Literal> conjuncts_;
};

inline auto to_string(const ConjFormula& f) -> std::string
{
    if (f.conjuncts().empty())
        return "true";
    std::string out;
    for (const auto& l : f.conjuncts()) {
        if (!out.empty())
            out += " & ";
        out += to_string(l);
    }
    return out;
}

/// Top-level disjunction; no other boolean structure is supported.
struct Disjunction {
    std::vector<ConjFormula> disjuncts;
    friend auto operator==(const Disjunction&, const Disjunction&) -> bool = default;
};

/// Checks the syntactic restrictions and reports L_R (no x = y conjunct) or L_0.
inline auto validate(const ConjFormula& f) -> FormulaClass
{
    if (f.x_arity() < 1)
        throw FormulaError("x arity must be at least 1");
    if (f.y_arity() < 0)
        throw FormulaError("y arity must be non-negative");
    auto in_range = [&](const Term& t) {
        switch (t.kind) {
        case TermKind::X: return t.index >= 0 && t.index < f.x_arity();
        case TermKind::Y: return t.index >= 0 && t.index < f.y_arity();
        case TermKind::Const: return true;
        }
        return false;
    };
    auto cls = FormulaClass::LR;
    for (const auto& l : f.conjuncts()) {
        if (!in_range(l.lhs) || !in_range(l.rhs))
            throw FormulaError("variable out of range in " + to_string(l));
        if (l.lhs == l.rhs)
            throw FormulaError("literal relates a term to itself: " + to_string(l));
        if (l.kind != LiteralKind::Eq)
            continue;
        if (l.lhs.kind == TermKind::X && l.rhs.kind == TermKind::Y) {
            cls = FormulaClass::L0;
            continue;
        }
        throw FormulaError("forbidden conjunct " + to_string(l));
    }
    return cls;
}

/// Term of an instantiated type: a free variable or an ambient vertex.
struct RTerm {
    bool fresh = false;
    Vertex id = 0;

    static auto var(int i) -> RTerm { return {true, i}; }
    static auto at(Vertex v) -> RTerm { return {false, v}; }

    friend auto operator<=>(const RTerm&, const RTerm&) = default;
};

/// Edge (positive) or non-edge constraint with at least one free variable.
struct RLiteral {
    bool positive = true;
    RTerm a;
    RTerm b;

    friend auto operator<=>(const RLiteral&, const RLiteral&) = default;
};

inline auto to_string(const RTerm& t) -> std::string
{
    return t.fresh ? "x" + std::to_string(t.id + 1) : std::to_string(t.id);
}

inline auto to_string(const RLiteral& l) -> std::string
{
    return std::string(l.positive ? "" : "not ") + to_string(l.a) + " R " + to_string(l.b);
}

class RType {
public:
    RType() = default;

    /// Normalises orientation, deduplicates and detects literal/negation clashes.
    RType(int x_arity, std::vector<std::optional<Vertex>> identified, std::vector<RLiteral> literals,
        std::optional<std::string> contradiction = std::nullopt)
        : x_arity_(x_arity), identified_(std::move(identified)), contradiction_(std::move(contradiction))
    {
        identified_.resize(static_cast<std::size_t>(x_arity_));
        for (auto& l : literals) {
            if (l.b < l.a)
                std::swap(l.a, l.b);
            if (!l.a.fresh && !l.b.fresh)
                throw HensonError("ambient-only literal in an R-type");
        }
        std::sort(literals.begin(), literals.end());
        literals.erase(std::unique(literals.begin(), literals.end()), literals.end());
        literals_ = std::move(literals);
        if (!contradiction_)
            for (const auto& l : literals_)
                if (l.positive && std::binary_search(literals_.begin(), literals_.end(), RLiteral{false, l.a, l.b})) {
                    contradiction_ = "both " + to_string(l) + " and its negation";
                    break;
                }
        for (int i = 0; i < x_arity_; ++i)
            if (!identified_[static_cast<std::size_t>(i)])
                fresh_.push_back(i);
    }

    [[nodiscard]] auto x_arity() const -> int { return x_arity_; }
    [[nodiscard]] auto fresh_vars() const -> const std::vector<int>& { return fresh_; }
    [[nodiscard]] auto identified() const -> const std::vector<std::optional<Vertex>>& { return identified_; }
    [[nodiscard]] auto literals() const -> const std::vector<RLiteral>& { return literals_; }
    [[nodiscard]] auto contradictory() const -> bool { return contradiction_.has_value(); }
    [[nodiscard]] auto contradiction() const -> const std::optional<std::string>& { return contradiction_; }

    friend auto operator==(const RType&, const RType&) -> bool = default;

private:
    int x_arity_ = 0;
    std::vector<std::optional<Vertex>> identified_;
    std::vector<RLiteral> literals_;
    std::optional<std::string> contradiction_;
    std::vector<int> fresh_;
};

/// One formula instantiated at one parameter tuple.
struct Instance {
    const ConjFormula* formula = nullptr;
    std::span<const Vertex> params;
};

/// The union of several instances sharing the x variables. Equalities x = y
/// are eliminated by substitution; ambient-only literals are evaluated against g.
inline auto instantiate_instances(std::span<const Instance> instances, const Graph& g) -> RType
{
    if (instances.empty())
        throw PreconditionError("no instances");
    auto x_arity = instances.front().formula->x_arity();
    std::vector<std::optional<Vertex>> ident(static_cast<std::size_t>(x_arity));
    std::optional<std::string> contradiction;

    for (const auto& inst : instances) {
        if (inst.formula->x_arity() != x_arity)
            throw PreconditionError("instances disagree on x arity");
        validate(*inst.formula);
        if (static_cast<int>(inst.params.size()) != inst.formula->y_arity())
            throw PreconditionError("parameter tuple length differs from y arity");
        for (auto v : inst.params)
            if (!g.has_vertex(v))
                throw PreconditionError("unknown parameter vertex " + std::to_string(v));
        for (const auto& l : inst.formula->conjuncts()) {
            if (l.kind != LiteralKind::Eq)
                continue;
            if (l.lhs.kind != TermKind::X || l.rhs.kind != TermKind::Y)
                throw FormulaError("forbidden conjunct " + to_string(l));
            auto& slot = ident[static_cast<std::size_t>(l.lhs.index)];
            auto target = inst.params[static_cast<std::size_t>(l.rhs.index)];
            if (slot && *slot != target) {
                if (!contradiction)
                    contradiction = to_string(l.lhs) + " identified with both " + std::to_string(*slot) + " and "
                        + std::to_string(target);
                continue;
            }
            slot = target;
        }
    }

    std::vector<RLiteral> literals;
    for (const auto& inst : instances) {
        auto resolve = [&](const Term& t) -> RTerm {
            switch (t.kind) {
            case TermKind::X: {
                const auto& slot = ident[static_cast<std::size_t>(t.index)];
                return slot ? RTerm::at(*slot) : RTerm::var(static_cast<int>(t.index));
            }
            case TermKind::Y: return RTerm::at(inst.params[static_cast<std::size_t>(t.index)]);
            case TermKind::Const:
                if (!g.has_vertex(t.index))
                    throw PreconditionError("unknown constant " + std::to_string(t.index));
                return RTerm::at(t.index);
            }
            return {};
        };
        for (const auto& l : inst.formula->conjuncts()) {
            if (l.kind == LiteralKind::Eq)
                continue;
            auto a = resolve(l.lhs);
            auto b = resolve(l.rhs);
            bool positive = l.kind == LiteralKind::Edge;
            if (a.fresh || b.fresh) {
                literals.push_back({positive, a, b});
                continue;
            }
            bool holds = a.id != b.id && g.adjacent(a.id, b.id);
            if (holds != positive && !contradiction)
                contradiction = "ambient fact fails: " + to_string(RLiteral{positive, a, b});
        }
    }
    return RType(x_arity, std::move(ident), std::move(literals), std::move(contradiction));
}

/// Instance of f at the parameter tuple b over the base of g.
inline auto instantiate(const ConjFormula& f, std::span<const Vertex> b, const PointedGraph& g) -> RType
{
    validate(f);
    if (static_cast<int>(b.size()) != f.y_arity())
        throw PreconditionError("parameter tuple length differs from y arity");
    Tuple params(b.begin(), b.end());
    if (make_set(params).size() != params.size())
        throw PreconditionError("parameter tuple repeats a vertex");
    for (auto v : params)
        if (contains(g.base, v))
            throw PreconditionError("parameter " + std::to_string(v)
                + " lies in the base; fold it into the formula as a constant");
    for (auto c : f.constants())
        if (!contains(g.base, c))
            throw PreconditionError("constant " + std::to_string(c) + " is not in the base");
    Instance inst{&f, params};
    return instantiate_instances(std::span<const Instance>(&inst, 1), g.graph);
}

/// The optimal solution: one new vertex per free variable, adjacent to exactly
/// what the positive literals demand.
struct OptimalCandidate {
    Graph extension;
    /// Free variable index and the vertex standing for it.
    std::vector<std::pair<int, Vertex>> assignment;
    /// Full solution tuple for x1..xk (identified variables map to their vertex).
    Tuple solution;
    VertexSet new_vertices;
};

inline auto optimal_candidate(const RType& p, const Graph& g) -> OptimalCandidate
{
    if (p.contradictory())
        throw PreconditionError("contradictory R-type has no optimal solution: " + *p.contradiction());
    OptimalCandidate out;
    out.extension = g;
    out.extension.reserve(g.size() + p.fresh_vars().size());
    Vertex next = g.max_vertex() ? *g.max_vertex() + 1 : 0;
    out.solution.assign(static_cast<std::size_t>(p.x_arity()), 0);
    for (int i = 0; i < p.x_arity(); ++i) {
        const auto& slot = p.identified()[static_cast<std::size_t>(i)];
        if (slot) {
            out.solution[static_cast<std::size_t>(i)] = *slot;
            continue;
        }
        out.extension.add_vertex(next);
        out.assignment.emplace_back(i, next);
        out.new_vertices.push_back(next);
        out.solution[static_cast<std::size_t>(i)] = next;
        ++next;
    }
    auto vertex_of = [&](const RTerm& t) { return t.fresh ? out.solution[static_cast<std::size_t>(t.id)] : t.id; };
    for (const auto& l : p.literals()) {
        if (!l.positive)
            continue;
        if (!l.a.fresh && !g.has_vertex(l.a.id))
            throw PreconditionError("R-type mentions unknown vertex " + std::to_string(l.a.id));
        if (!l.b.fresh && !g.has_vertex(l.b.id))
            throw PreconditionError("R-type mentions unknown vertex " + std::to_string(l.b.id));
        out.extension.add_edge(vertex_of(l.a), vertex_of(l.b));
    }
    return out;
}

/// True iff `solution` satisfies every literal of p in h.
inline auto realizes(const RType& p, const Graph& h, std::span<const Vertex> solution) -> bool
{
    if (static_cast<int>(solution.size()) != p.x_arity())
        return false;
    for (int i = 0; i < p.x_arity(); ++i) {
        const auto& slot = p.identified()[static_cast<std::size_t>(i)];
        if (slot && solution[static_cast<std::size_t>(i)] != *slot)
            return false;
    }
    auto vertex_of = [&](const RTerm& t) { return t.fresh ? solution[static_cast<std::size_t>(t.id)] : t.id; };
    for (const auto& l : p.literals()) {
        auto u = vertex_of(l.a);
        auto v = vertex_of(l.b);
        bool edge = u != v && h.adjacent(u, v);
        if (edge != l.positive)
            return false;
    }
    return true;
}

enum class Theory : std::uint8_t { T0, Tn };

/// No K_n through the new vertices of the candidate.
inline auto candidate_kn_free(const OptimalCandidate& cand, int n) -> bool
{
    if (cand.new_vertices.empty())
        return true;
    auto region = cand.new_vertices;
    for (auto v : cand.new_vertices)
        region = set_union(region, cand.extension.neighbours(v));
    return !find_clique_within(cand.extension, region, static_cast<std::size_t>(n)).has_value();
}

/// T0: non-contradictory. Tn: additionally the optimal candidate adds no K_n.
/// The ambient graph is assumed K_n-free, so only cliques through new vertices are searched.
inline auto is_consistent(const RType& p, const Graph& g, int n, Theory theory) -> bool
{
    if (p.contradictory())
        return false;
    if (theory == Theory::T0)
        return true;
    return candidate_kn_free(optimal_candidate(p, g), n);
}

struct RPhiSupport {
    /// Parameters and constants b with some x_i R b conjunct.
    VertexSet parameters;
    /// Variables x_i (0-based) with some x_i R b conjunct.
    std::vector<int> variables;

    [[nodiscard]] auto size() const -> std::size_t { return parameters.size() + variables.size(); }
};

inline auto r_phi_support(const ConjFormula& f, std::span<const Vertex> b, const PointedGraph& g) -> RPhiSupport
{
    if (validate(f) != FormulaClass::LR)
        throw FormulaError("support is defined for equality-free formulas only");
    if (static_cast<int>(b.size()) != f.y_arity())
        throw PreconditionError("parameter tuple length differs from y arity");
    (void)g;
    std::vector<Vertex> params;
    std::vector<int> vars;
    for (const auto& l : f.conjuncts()) {
        if (l.kind != LiteralKind::Edge || l.lhs.kind != TermKind::X || l.rhs.kind == TermKind::X)
            continue;
        vars.push_back(static_cast<int>(l.lhs.index));
        params.push_back(l.rhs.kind == TermKind::Y ? b[static_cast<std::size_t>(l.rhs.index)] : l.rhs.index);
    }
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return {make_set(std::move(params)), std::move(vars)};
}

} // namespace henson
