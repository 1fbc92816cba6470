#pragma once

// Subcommands behind the henson CLI. Each writes one JSON document to `out`,
// diagnostics to `err`, and returns the process exit code.

#include "henson/generate.hpp"
#include "henson/io.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace henson {

inline constexpr int exit_ok = 0;
/// A report ran but its verification failed.
inline constexpr int exit_failed = 1;
inline constexpr int exit_input = 2;
inline constexpr int exit_mismatch = 3;

namespace detail {

template <typename Body>
auto guarded(std::ostream& err, Body&& body) -> int
{
    try {
        return body();
    } catch (const HensonError& e) {
        err << "error: " << e.what() << "\n";
        return exit_input;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_input;
    }
}

inline auto require_formula(const ProblemFile& p) -> const FormulaSpec&
{
    if (!p.formula)
        throw InputError("problem file has no formula");
    return *p.formula;
}

inline void emit(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

/// Reason-level comparison: the criterion's "inconsistent" must match the
/// oracle's own consistency test, and the verdicts must match otherwise.
inline auto verdicts_agree(const DividesVerdict& v, bool oracle_consistent, const OracleVerdict* o) -> bool
{
    if (!oracle_consistent)
        return v.divides && v.reason == DividesReason::Inconsistent;
    return v.reason != DividesReason::Inconsistent && o && o->divides == v.divides;
}

} // namespace detail

struct DividesOptions {
    bool t0 = false;
    bool oracle = false;
    std::optional<int> l_max{};
};

inline auto cmd_divides(const ProblemFile& p, const DividesOptions& opt, std::ostream& out, std::ostream& err) -> int
{
    return detail::guarded(err, [&] {
        const auto& spec = detail::require_formula(p);
        const auto& b = p.tuple("b");
        auto l_max = opt.l_max.value_or(default_l_max(p.n));
        const auto* conj = std::get_if<ConjFormula>(&spec);
        if (opt.t0 && !conj)
            throw InputError("--t0 takes a single conjunction");

        DividesVerdict v;
        if (opt.t0)
            v = divides_formula_T0(*conj, b, p.graph);
        else
            v = std::visit([&](const auto& f) { return divides_formula(f, b, p.graph, p.n); }, spec);
        auto j = to_json(v);
        if (!opt.oracle) {
            detail::emit(out, j);
            return exit_ok;
        }

        TemplateOracle o(p.graph.graph, p.graph.base, b, opt.t0 ? 0 : p.n, opt.t0 ? Theory::T0 : Theory::Tn, l_max);
        bool agree = true;
        if (conj) {
            bool consistent = o.consistent(*conj);
            std::optional<OracleVerdict> ov;
            if (consistent)
                ov = o.divides(*conj);
            j["oracle"] = ov ? to_json(*ov) : json{{"consistent", false}};
            agree = detail::verdicts_agree(v, consistent, ov ? &*ov : nullptr);
        } else {
            const auto& d = std::get<Disjunction>(spec);
            // The graph criterion leaves proper disjunctions open, so there is nothing to compare.
            j["oracle"] = to_json(o.divides(d));
            if (d.disjuncts.size() == 1)
                agree = j["oracle"]["divides"].get<bool>() == v.divides;
        }
        j["agree"] = agree;
        detail::emit(out, j);
        if (!agree)
            err << "criterion and oracle disagree\n";
        return agree ? exit_ok : exit_mismatch;
    });
}

enum class Relation : std::uint8_t { Dividing, Forking, Edge };

struct IndepOptions {
    Relation rel = Relation::Dividing;
    bool oracle = false;
    std::optional<int> l_max{};
};

inline auto cmd_indep(const ProblemFile& p, const IndepOptions& opt, std::ostream& out, std::ostream& err) -> int
{
    return detail::guarded(err, [&] {
        const auto& A = p.set("A");
        const auto& B = p.set("B");
        const auto& C = p.set("C");
        json j;
        if (opt.rel == Relation::Edge) {
            if (opt.oracle)
                throw InputError("--oracle applies to --rel d or f");
            j = {{"independent", edge_indep(A, B, C, p.graph.graph)}};
            if (!j["independent"].get<bool>()) {
                json viol = json::object();
                if (auto s = set_difference(set_intersection(A, B), C); !s.empty())
                    viol["shared"] = s.front();
                else
                    for (auto a : set_difference(A, C))
                        for (auto b : set_difference(B, C))
                            if (viol.empty() && p.graph.graph.adjacent(a, b))
                                viol["edge"] = {a, b};
                j["violation"] = std::move(viol);
            }
            detail::emit(out, j);
            return exit_ok;
        }
        auto r = opt.rel == Relation::Forking ? forking_indep(A, B, C, p.graph.graph, p.n)
                                              : dividing_indep(A, B, C, p.graph.graph, p.n);
        j = to_json(r);
        if (!opt.oracle) {
            detail::emit(out, j);
            return exit_ok;
        }
        auto o = dividing_indep_oracle(A, B, C, p.graph.graph, p.n, opt.l_max.value_or(default_l_max(p.n)));
        j["oracle"] = {{"independent", o}};
        j["agree"] = o == r.independent;
        detail::emit(out, j);
        if (o != r.independent)
            err << "criterion and oracle disagree\n";
        return o == r.independent ? exit_ok : exit_mismatch;
    });
}

struct GammaOptions {
    std::optional<int> length{};
    /// Name of a set within b to use instead of the K_n^phi witness.
    std::optional<std::string> set{};
};

inline auto cmd_gamma(const ProblemFile& p, const GammaOptions& opt, std::ostream& out, std::ostream& err) -> int
{
    return detail::guarded(err, [&] {
        const auto& b = p.tuple("b");
        auto length = opt.length.value_or(p.n);
        if (length < 1)
            throw InputError("--length must be positive");
        const ConjFormula* f = p.formula ? std::get_if<ConjFormula>(&*p.formula) : nullptr;
        VertexSet B;
        if (opt.set) {
            B = p.set(*opt.set);
            if (!set_difference(B, make_set(b)).empty())
                throw InputError("set " + *opt.set + " is not contained in b");
        } else {
            if (!f)
                throw InputError("no conjunctive formula; name the subset with --set");
            auto w = kphi_bound(*f, b, p.graph, p.n);
            if (!w)
                throw InputError("the formula has no K_n^phi witness; name the subset with --set");
            B = w->subset;
        }
        auto w = gamma(p.graph.base, b, B, p.graph.graph, length);
        json j{{"subset", B}, {"length", length}, {"template", to_json(gamma_template(b, B))},
            {"window", to_json(w)}, {"kn_free", is_kn_free(w.graph, p.n)}};
        if (f && validate(*f) == FormulaClass::LR && length >= p.n - 1)
            j["inconsistent_at_n_minus_1"] = check_k_inconsistent(*f, w, p.n - 1, p.n);
        detail::emit(out, j);
        return exit_ok;
    });
}

struct OracleOptions {
    bool t0 = false;
    std::optional<int> l_max{};
};

inline auto cmd_oracle(const ProblemFile& p, const OracleOptions& opt, std::ostream& out, std::ostream& err) -> int
{
    return detail::guarded(err, [&] {
        auto l_max = opt.l_max.value_or(default_l_max(p.n));
        if (!p.formula) {
            if (opt.t0)
                throw InputError("--t0 needs a formula");
            auto r = dividing_indep_oracle(p.set("A"), p.set("B"), p.set("C"), p.graph.graph, p.n, l_max);
            detail::emit(out, {{"independent", r}});
            return exit_ok;
        }
        const auto& b = p.tuple("b");
        TemplateOracle o(p.graph.graph, p.graph.base, b, opt.t0 ? 0 : p.n, opt.t0 ? Theory::T0 : Theory::Tn, l_max);
        auto v = std::visit([&](const auto& f) { return o.divides(f); }, *p.formula);
        detail::emit(out, to_json(v));
        return exit_ok;
    });
}

inline auto cmd_example62(int n, std::optional<int> l_max, std::ostream& out, std::ostream& err) -> int
{
    return detail::guarded(err, [&] {
        if (n < 3)
            throw InputError("n must be at least 3");
        auto r = verify_example_62(n, l_max.value_or(std::max(6, n + 1)));
        detail::emit(out, to_json(r));
        return r.forks && r.nondividing ? exit_ok : exit_failed;
    });
}

inline auto cmd_lemma61(std::ostream& out, std::ostream& err) -> int
{
    return detail::guarded(err, [&] {
        auto r = lemma61_scan();
        detail::emit(out, to_json(r));
        return r.violations == 0 ? exit_ok : exit_failed;
    });
}

// ---- fuzzing

struct FuzzOptions {
    int n = 3;
    std::uint64_t trials = 1000;
    std::uint64_t seed = 1;
    int max_vertices = 7;
    std::filesystem::path replay_dir = "fuzz-replays";
    /// Mutation hook: the criterion forgets kn-phi-bound verdicts.
    bool inject_bug = false;
};

struct FuzzCounts {
    std::uint64_t agreement = 0;
    std::uint64_t gamma = 0;
    std::uint64_t support = 0;
    std::uint64_t no_r = 0;
    std::uint64_t independence = 0;
    std::uint64_t t0 = 0;
};

/// One random problem: graph, C, b, A, B and a formula over b.
inline auto random_problem(int n, int max_vertices, std::mt19937_64& rng) -> ProblemFile
{
    ProblemFile p;
    p.n = n;
    auto size = static_cast<std::size_t>(uniform_int(rng, 2, std::max(2, max_vertices)));
    auto density = 0.2 + 0.6 * unit_draw(rng);
    p.graph.graph = random_kn_free(n, size, density, rng());
    const auto& vs = p.graph.graph.vertices();
    auto C = random_subset(rng, vs, std::min<std::size_t>(3, size - 1));
    auto rest = set_difference(vs, C);
    auto b = random_tuple(rng, rest, static_cast<std::size_t>(uniform_int(rng, 1, std::min<std::int64_t>(3, static_cast<std::int64_t>(rest.size())))));
    p.graph.base = C;
    p.graph.sets["C"] = C;
    p.graph.sets["A"] = random_subset(rng, vs, 3);
    p.graph.sets["B"] = random_subset(rng, vs, 3);
    p.graph.tuples["b"] = b;
    auto xa = static_cast<int>(uniform_int(rng, 1, 2));
    p.formula = random_formula(rng, xa, static_cast<int>(b.size()), C, {0.45, 0.2, 0.04});
    return p;
}

namespace detail {

inline auto has_positive_xy(const ConjFormula& f) -> bool
{
    return std::any_of(f.conjuncts().begin(), f.conjuncts().end(), [](const Literal& l) {
        return l.kind == LiteralKind::Edge && l.lhs.kind == TermKind::X && l.rhs.kind == TermKind::Y;
    });
}

} // namespace detail

/// Runs every cross-check on one problem; returns the failed checks.
inline auto check_problem(const ProblemFile& p, bool inject_bug, FuzzCounts& counts) -> std::vector<std::string>
{
    std::vector<std::string> fails;
    const auto& f = std::get<ConjFormula>(*p.formula);
    const auto& b = p.tuple("b");
    const int n = p.n;

    auto v = divides_formula(f, b, p.graph, n);
    if (inject_bug && v.reason == DividesReason::KnPhiBound)
        v = {};
    TemplateOracle o(p.graph.graph, p.graph.base, b, n, Theory::Tn, default_l_max(n));
    bool consistent = o.consistent(f);
    std::optional<OracleVerdict> ov;
    if (consistent)
        ov = o.divides(f);
    ++counts.agreement;
    if (!detail::verdicts_agree(v, consistent, ov ? &*ov : nullptr))
        fails.push_back("criterion/oracle disagreement");

    if (v.reason == DividesReason::KnPhiBound) {
        ++counts.support;
        auto s = r_phi_support(f, b, p.graph);
        auto in_b = set_intersection(s.parameters, make_set(b));
        if (static_cast<int>(s.size()) < n || in_b.size() <= 1)
            fails.push_back("support of a dividing formula is too small");
        ++counts.gamma;
        auto idx = o.find(gamma_template(b, v.witness->subset));
        if (!idx)
            fails.push_back("gamma template is not valid");
        else if (!o.inconsistent_at(f, *idx, n - 1))
            fails.push_back("gamma window is not (n-1)-inconsistent");
    }
    if (validate(f) == FormulaClass::LR && !detail::has_positive_xy(f) && v.reason != DividesReason::Inconsistent) {
        ++counts.no_r;
        if (v.divides)
            fails.push_back("formula without x R y divides");
    }

    auto tv = divides_formula_T0(f, b, p.graph);
    ++counts.t0;
    TemplateOracle o0(p.graph.graph, p.graph.base, b, 0, Theory::T0, default_l_max(n));
    bool c0 = o0.consistent(f);
    if (c0 != (tv.reason != DividesReason::Inconsistent) || (c0 && o0.divides(f).divides != tv.divides))
        fails.push_back("T0 criterion/oracle disagreement");

    const auto& A = p.set("A");
    const auto& B = p.set("B");
    const auto& C = p.set("C");
    ++counts.independence;
    auto d = dividing_indep(A, B, C, p.graph.graph, n);
    if (d.independent != dividing_indep_oracle(A, B, C, p.graph.graph, n, default_l_max(n)))
        fails.push_back("independence criterion/oracle disagreement");
    if (edge_indep(A, B, C, p.graph.graph) && !d.independent)
        fails.push_back("edge independence without dividing independence");
    if (forking_indep(A, B, C, p.graph.graph, n).independent != d.independent)
        fails.push_back("forking and dividing independence differ");
    return fails;
}

inline auto cmd_fuzz(const FuzzOptions& opt, std::ostream& out, std::ostream& err) -> int
{
    return detail::guarded(err, [&] {
        if (opt.n < 3 || opt.n > 6)
            throw InputError("--n must be between 3 and 6");
        if (opt.max_vertices < 2 || opt.max_vertices > 12)
            throw InputError("--max-vertices must be between 2 and 12");
        FuzzCounts counts;
        std::uint64_t failures = 0;
        json replays = json::array();
        for (std::uint64_t t = 0; t < opt.trials; ++t) {
            auto rng = trial_rng(opt.seed, t);
            auto p = random_problem(opt.n, opt.max_vertices, rng);
            auto fails = check_problem(p, opt.inject_bug, counts);
            if (fails.empty())
                continue;
            ++failures;
            std::filesystem::create_directories(opt.replay_dir);
            auto path = opt.replay_dir
                / ("fuzz-n" + std::to_string(opt.n) + "-s" + std::to_string(opt.seed) + "-t" + std::to_string(t) + ".json");
            auto j = to_json(p);
            j["failures"] = fails;
            std::ofstream(path) << j.dump(2) << "\n";
            replays.push_back(path.string());
        }
        json summary{{"n", opt.n}, {"trials", opt.trials}, {"seed", opt.seed}, {"max_vertices", opt.max_vertices},
            {"checks",
                {{"agreement", counts.agreement}, {"gamma", counts.gamma}, {"support", counts.support},
                    {"no_r", counts.no_r}, {"independence", counts.independence}, {"t0", counts.t0}}},
            {"failures", failures}, {"replays", replays}};
        detail::emit(out, summary);
        return failures == 0 ? exit_ok : exit_mismatch;
    });
}

} // namespace henson
