#pragma once

// JSON encodings for graphs, formulas, templates, verdicts and problem files.
// Every writer has a matching reader; readers throw InputError on anything
// malformed.

#include "henson/formula.hpp"
#include "henson/graph.hpp"
#include "henson/independence.hpp"
#include "henson/oracle.hpp"
#include "henson/sequence.hpp"

#include <json.hpp>

#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace henson {

using json = nlohmann::json;

class InputError : public HensonError {
public:
    using HensonError::HensonError;
};

namespace detail {

inline auto require_field(const json& j, const char* key, const std::string& what) -> const json&
{
    if (!j.is_object())
        throw InputError(what + " must be a JSON object");
    auto it = j.find(key);
    if (it == j.end())
        throw InputError(what + " lacks field \"" + key + "\"");
    return *it;
}

inline auto as_int(const json& j, const std::string& what) -> std::int64_t
{
    if (!j.is_number_integer())
        throw InputError(what + " must be an integer");
    return j.get<std::int64_t>();
}

inline auto as_bool(const json& j, const std::string& what) -> bool
{
    if (!j.is_boolean())
        throw InputError(what + " must be a boolean");
    return j.get<bool>();
}

inline auto as_vertex_list(const json& j, const std::string& what) -> Tuple
{
    if (!j.is_array())
        throw InputError(what + " must be an array of integers");
    Tuple out;
    out.reserve(j.size());
    for (const auto& v : j)
        out.push_back(as_int(v, what + " entry"));
    return out;
}

} // namespace detail

// ---- graphs

inline auto to_json(const Graph& g) -> json
{
    json edges = json::array();
    for (auto [u, v] : g.edge_list())
        edges.push_back({u, v});
    return {{"vertices", g.vertices()}, {"edges", std::move(edges)}};
}

inline auto graph_from_json(const json& j) -> Graph
{
    auto verts = detail::as_vertex_list(detail::require_field(j, "vertices", "graph"), "graph.vertices");
    auto set = make_set(verts);
    if (set.size() != verts.size())
        throw InputError("graph lists a vertex twice");
    if (set.size() > max_vertices())
        throw InputError("graph has " + std::to_string(set.size()) + " vertices, above the bound "
            + std::to_string(max_vertices()) + " (HENSON_MAX_VERTICES)");
    Graph g(set);
    const auto& edges = detail::require_field(j, "edges", "graph");
    if (!edges.is_array())
        throw InputError("graph.edges must be an array");
    std::set<std::pair<Vertex, Vertex>> seen;
    for (const auto& e : edges) {
        if (!e.is_array() || e.size() != 2)
            throw InputError("each edge must be a pair [u, v]");
        auto u = detail::as_int(e[0], "edge endpoint");
        auto v = detail::as_int(e[1], "edge endpoint");
        if (u == v)
            throw InputError("loop at vertex " + std::to_string(u));
        if (!g.has_vertex(u) || !g.has_vertex(v))
            throw InputError("edge [" + std::to_string(u) + ", " + std::to_string(v) + "] uses an unlisted vertex");
        if (!seen.emplace(std::min(u, v), std::max(u, v)).second)
            throw InputError("duplicate edge [" + std::to_string(u) + ", " + std::to_string(v) + "]");
        g.add_edge(u, v);
    }
    return g;
}

// ---- formulas

inline auto term_from_string(const std::string& s) -> Term
{
    auto bad = [&] { return InputError("bad term \"" + s + "\" (expected x<i>, y<j> or c:<id>)"); };
    auto parse_int = [&](const std::string& digits) -> std::int64_t {
        if (digits.empty())
            throw bad();
        std::size_t used = 0;
        std::int64_t v = 0;
        try {
            v = std::stoll(digits, &used);
        } catch (const std::exception&) {
            throw bad();
        }
        if (used != digits.size())
            throw bad();
        return v;
    };
    if (s.rfind("c:", 0) == 0)
        return Term::c(parse_int(s.substr(2)));
    if (s.size() >= 2 && (s[0] == 'x' || s[0] == 'y')) {
        auto i = parse_int(s.substr(1));
        if (i < 1 || i > 1'000'000)
            throw bad();
        auto idx = static_cast<int>(i - 1);
        return s[0] == 'x' ? Term::x(idx) : Term::y(idx);
    }
    throw bad();
}

inline auto kind_name(LiteralKind k) -> std::string
{
    switch (k) {
    case LiteralKind::Edge: return "edge";
    case LiteralKind::NonEdge: return "nonedge";
    case LiteralKind::Eq: return "eq";
    }
    return "edge";
}

inline auto to_json(const Literal& l) -> json
{
    return {{"kind", kind_name(l.kind)}, {"lhs", to_string(l.lhs)}, {"rhs", to_string(l.rhs)}};
}

inline auto literal_from_json(const json& j) -> Literal
{
    const auto& kind = detail::require_field(j, "kind", "conjunct");
    if (!kind.is_string())
        throw InputError("conjunct kind must be a string");
    auto name = kind.get<std::string>();
    LiteralKind k{};
    if (name == "edge")
        k = LiteralKind::Edge;
    else if (name == "nonedge")
        k = LiteralKind::NonEdge;
    else if (name == "eq")
        k = LiteralKind::Eq;
    else
        throw InputError("unknown conjunct kind \"" + name + "\"");
    auto term = [&](const char* key) {
        const auto& t = detail::require_field(j, key, "conjunct");
        if (!t.is_string())
            throw InputError(std::string("conjunct ") + key + " must be a string");
        return term_from_string(t.get<std::string>());
    };
    return Literal::make(k, term("lhs"), term("rhs"));
}

inline auto to_json(const ConjFormula& f) -> json
{
    json cs = json::array();
    for (const auto& l : f.conjuncts())
        cs.push_back(to_json(l));
    return {{"x_arity", f.x_arity()}, {"y_arity", f.y_arity()}, {"conjuncts", std::move(cs)}};
}

inline auto to_json(const Disjunction& d) -> json
{
    json ds = json::array();
    for (const auto& f : d.disjuncts)
        ds.push_back(to_json(f));
    return {{"disjuncts", std::move(ds)}};
}

/// Parses and validates one conjunction.
inline auto conj_from_json(const json& j) -> ConjFormula
{
    auto xa = detail::as_int(detail::require_field(j, "x_arity", "formula"), "x_arity");
    auto ya = detail::as_int(detail::require_field(j, "y_arity", "formula"), "y_arity");
    if (xa < 1 || xa > 64 || ya < 0 || ya > 64)
        throw InputError("formula arities out of range");
    const auto& cs = detail::require_field(j, "conjuncts", "formula");
    if (!cs.is_array())
        throw InputError("conjuncts must be an array");
    std::vector<Literal> lits;
    for (const auto& c : cs)
        lits.push_back(literal_from_json(c));
    ConjFormula f(static_cast<int>(xa), static_cast<int>(ya), std::move(lits));
    try {
        validate(f);
    } catch (const PreconditionError& e) {
        throw InputError(std::string("invalid formula: ") + e.what());
    }
    return f;
}

using FormulaSpec = std::variant<ConjFormula, Disjunction>;

inline auto formula_from_json(const json& j) -> FormulaSpec
{
    if (j.is_object() && j.contains("disjuncts")) {
        const auto& ds = j.at("disjuncts");
        if (!ds.is_array() || ds.empty())
            throw InputError("disjuncts must be a non-empty array");
        Disjunction d;
        for (const auto& f : ds)
            d.disjuncts.push_back(conj_from_json(f));
        for (const auto& f : d.disjuncts)
            if (f.x_arity() != d.disjuncts.front().x_arity() || f.y_arity() != d.disjuncts.front().y_arity())
                throw InputError("disjuncts must share their arities");
        return d;
    }
    return conj_from_json(j);
}

inline auto to_json(const FormulaSpec& f) -> json
{
    return std::visit([](const auto& v) { return to_json(v); }, f);
}

// ---- templates (positions are 1-based in JSON)

inline auto to_json(const SequenceTemplate& t) -> json
{
    json constant = json::array();
    for (auto i : t.constant)
        constant.push_back(i + 1);
    json cross = json::array();
    for (auto [i, j] : t.cross)
        cross.push_back({i + 1, j + 1});
    return {{"positions", t.positions}, {"constant", std::move(constant)}, {"cross", std::move(cross)}};
}

inline auto template_from_json(const json& j) -> SequenceTemplate
{
    SequenceTemplate t;
    auto k = detail::as_int(detail::require_field(j, "positions", "template"), "positions");
    if (k < 0 || k > 64)
        throw InputError("template positions out of range");
    t.positions = static_cast<int>(k);
    for (auto i : detail::as_vertex_list(detail::require_field(j, "constant", "template"), "constant"))
        t.constant.push_back(static_cast<int>(i - 1));
    const auto& cross = detail::require_field(j, "cross", "template");
    if (!cross.is_array())
        throw InputError("cross must be an array");
    for (const auto& p : cross) {
        if (!p.is_array() || p.size() != 2)
            throw InputError("cross entries must be pairs");
        t.cross.emplace_back(static_cast<int>(detail::as_int(p[0], "cross") - 1),
            static_cast<int>(detail::as_int(p[1], "cross") - 1));
    }
    t.normalize();
    try {
        t.validate();
    } catch (const PreconditionError& e) {
        throw InputError(std::string("invalid template: ") + e.what());
    }
    return t;
}

// ---- verdicts

inline auto reason_from_string(const std::string& s) -> DividesReason
{
    for (auto r : {DividesReason::Inconsistent, DividesReason::EqualityConjunct, DividesReason::KnPhiBound,
             DividesReason::None})
        if (to_string(r) == s)
            return r;
    throw InputError("unknown reason \"" + s + "\"");
}

inline auto to_json(const DividesVerdict& v) -> json
{
    json w = json::object();
    if (v.witness) {
        w["subset"] = v.witness->subset;
        w["bound"] = v.witness->against_optimal.members;
        w["solution"] = v.witness->optimal_solution;
        w["extension"] = to_json(v.witness->extension);
    }
    if (v.equality)
        w["equality"] = to_json(*v.equality);
    if (v.detail)
        w["detail"] = *v.detail;
    return {{"divides", v.divides}, {"reason", to_string(v.reason)}, {"witness", std::move(w)}};
}

inline auto verdict_from_json(const json& j) -> DividesVerdict
{
    DividesVerdict v;
    v.divides = detail::as_bool(detail::require_field(j, "divides", "verdict"), "divides");
    const auto& r = detail::require_field(j, "reason", "verdict");
    if (!r.is_string())
        throw InputError("reason must be a string");
    v.reason = reason_from_string(r.get<std::string>());
    const auto& w = detail::require_field(j, "witness", "verdict");
    if (w.contains("subset")) {
        PhiBoundWitness pw;
        pw.subset = make_set(detail::as_vertex_list(w.at("subset"), "subset"));
        pw.against_optimal.members = make_set(detail::as_vertex_list(detail::require_field(w, "bound", "witness"), "bound"));
        pw.optimal_solution = detail::as_vertex_list(detail::require_field(w, "solution", "witness"), "solution");
        pw.extension = graph_from_json(detail::require_field(w, "extension", "witness"));
        v.witness = std::move(pw);
    }
    if (w.contains("equality"))
        v.equality = literal_from_json(w.at("equality"));
    if (w.contains("detail")) {
        if (!w.at("detail").is_string())
            throw InputError("detail must be a string");
        v.detail = w.at("detail").get<std::string>();
    }
    return v;
}

inline auto to_json(const IndependenceResult& r) -> json
{
    json out{{"independent", r.independent}};
    if (r.independent)
        return out;
    json viol = json::object();
    if (r.shared)
        viol["shared"] = *r.shared;
    if (r.subset)
        viol["subset"] = *r.subset;
    if (r.witness)
        viol["witness"] = r.witness->members;
    out["violation"] = std::move(viol);
    return out;
}

inline auto independence_from_json(const json& j) -> IndependenceResult
{
    IndependenceResult r;
    r.independent = detail::as_bool(detail::require_field(j, "independent", "independence"), "independent");
    if (r.independent)
        return r;
    const auto& v = detail::require_field(j, "violation", "independence");
    if (v.contains("shared"))
        r.shared = detail::as_int(v.at("shared"), "shared");
    if (v.contains("subset"))
        r.subset = make_set(detail::as_vertex_list(v.at("subset"), "subset"));
    if (v.contains("witness"))
        r.witness = BoundWitness{make_set(detail::as_vertex_list(v.at("witness"), "witness"))};
    return r;
}

inline auto to_json(const OracleVerdict& v) -> json
{
    json out{{"divides", v.divides}, {"l_max", v.l_max}, {"templates", v.templates}};
    out["template"] = v.witness ? to_json(*v.witness) : json(nullptr);
    out["k"] = v.k ? json(*v.k) : json(nullptr);
    return out;
}

inline auto oracle_verdict_from_json(const json& j) -> OracleVerdict
{
    OracleVerdict v;
    v.divides = detail::as_bool(detail::require_field(j, "divides", "oracle verdict"), "divides");
    v.l_max = static_cast<int>(detail::as_int(detail::require_field(j, "l_max", "oracle verdict"), "l_max"));
    v.templates = static_cast<std::uint64_t>(detail::as_int(detail::require_field(j, "templates", "oracle verdict"), "templates"));
    if (const auto& t = detail::require_field(j, "template", "oracle verdict"); !t.is_null())
        v.witness = template_from_json(t);
    if (const auto& k = detail::require_field(j, "k", "oracle verdict"); !k.is_null())
        v.k = static_cast<int>(detail::as_int(k, "k"));
    return v;
}

inline auto to_json(const SequenceWindow& w) -> json
{
    return {{"graph", to_json(w.graph)}, {"base", w.base}, {"copies", w.copies}};
}

inline auto to_json(const Lemma61Report& r) -> json
{
    return {{"total", r.total}, {"edge_free_pair", r.edge_free_pair}, {"triangle", r.triangle},
        {"violations", r.violations}, {"copies", r.copies},
        {"counterexample", r.counterexample ? to_json(*r.counterexample) : json(nullptr)}};
}

inline auto to_json(const Example62Report& r) -> json
{
    return {{"n", r.n}, {"l_max", r.l_max}, {"disjuncts", r.disjuncts}, {"dividing_disjuncts", r.dividing_disjuncts},
        {"forks", r.forks}, {"templates_checked", r.templates_checked}, {"violations", r.violations},
        {"nondividing", r.nondividing},
        {"counterexample", r.counterexample ? to_json(*r.counterexample) : json(nullptr)}};
}

// ---- problem files

struct ProblemFile {
    int n = 3;
    /// graph.base is sets["C"].
    PointedGraph graph;
    std::optional<FormulaSpec> formula;

    [[nodiscard]] auto set(const std::string& name) const -> const VertexSet&
    {
        auto it = graph.sets.find(name);
        if (it == graph.sets.end())
            throw InputError("problem file has no set \"" + name + "\"");
        return it->second;
    }

    [[nodiscard]] auto tuple(const std::string& name) const -> const Tuple&
    {
        auto it = graph.tuples.find(name);
        if (it == graph.tuples.end())
            throw InputError("problem file has no tuple \"" + name + "\"");
        return it->second;
    }
};

inline auto to_json(const ProblemFile& p) -> json
{
    json out{{"n", p.n}, {"graph", to_json(p.graph.graph)}};
    json sets = json::object();
    for (const auto& [name, s] : p.graph.sets)
        sets[name] = s;
    out["sets"] = std::move(sets);
    json tuples = json::object();
    for (const auto& [name, t] : p.graph.tuples)
        tuples[name] = t;
    out["tuples"] = std::move(tuples);
    if (p.formula)
        out["formula"] = to_json(*p.formula);
    return out;
}

inline auto problem_from_json(const json& j) -> ProblemFile
{
    ProblemFile p;
    auto n = detail::as_int(detail::require_field(j, "n", "problem"), "n");
    if (n < 3 || n > 64)
        throw InputError("n must be between 3 and 64");
    p.n = static_cast<int>(n);
    p.graph.graph = graph_from_json(detail::require_field(j, "graph", "problem"));
    const auto& sets = detail::require_field(j, "sets", "problem");
    if (!sets.is_object())
        throw InputError("sets must be an object");
    for (const auto& [name, s] : sets.items()) {
        auto list = detail::as_vertex_list(s, "set " + name);
        auto vs = make_set(list);
        if (vs.size() != list.size())
            throw InputError("set " + name + " repeats a vertex");
        p.graph.sets[name] = std::move(vs);
    }
    if (!p.graph.sets.contains("C"))
        throw InputError("problem file needs the set C");
    p.graph.base = p.graph.sets.at("C");
    if (j.contains("tuples")) {
        const auto& tuples = j.at("tuples");
        if (!tuples.is_object())
            throw InputError("tuples must be an object");
        for (const auto& [name, t] : tuples.items())
            p.graph.tuples[name] = detail::as_vertex_list(t, "tuple " + name);
    }
    try {
        p.graph.validate();
    } catch (const PreconditionError& e) {
        throw InputError(e.what());
    }
    if (!is_kn_free(p.graph.graph, p.n))
        throw InputError("graph contains K_" + std::to_string(p.n));
    if (j.contains("formula"))
        p.formula = formula_from_json(j.at("formula"));
    return p;
}

inline auto parse_json_text(const std::string& text, const std::string& origin) -> json
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(origin + ": " + e.what());
    }
}

inline auto load_problem(const std::string& path) -> ProblemFile
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return problem_from_json(parse_json_text(buf.str(), path));
}

} // namespace henson
