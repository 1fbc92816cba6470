#include "henson/henson.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <string>

namespace {

auto with_problem(const std::string& path, auto&& run) -> int
{
    try {
        return run(henson::load_problem(path));
    } catch (const henson::HensonError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return henson::exit_input;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Dividing and forking checks for K_n-free graphs"};
    app.require_subcommand(1);

    std::string file;
    std::optional<int> l_max;

    auto* divides = app.add_subcommand("divides", "decide whether the formula instance divides over C");
    henson::DividesOptions dopt;
    divides->add_option("file", file, "problem file")->required();
    divides->add_flag("--t0", dopt.t0, "use the random-graph theory");
    divides->add_flag("--oracle", dopt.oracle, "cross-check against the template oracle");
    divides->add_option("--lmax", l_max, "oracle sequence length");

    auto* indep = app.add_subcommand("indep", "decide A independent from B over C");
    henson::IndepOptions iopt;
    indep->add_option("file", file, "problem file")->required();
    std::map<std::string, henson::Relation> rels{
        {"d", henson::Relation::Dividing}, {"f", henson::Relation::Forking}, {"R", henson::Relation::Edge}};
    indep->add_option("--rel", iopt.rel, "relation: d, f or R")->transform(CLI::CheckedTransformer(rels));
    indep->add_flag("--oracle", iopt.oracle, "cross-check against the oracle");
    indep->add_option("--lmax", l_max, "oracle sequence length");

    auto* gamma = app.add_subcommand("gamma", "build the Gamma window for the formula's witness");
    henson::GammaOptions gopt;
    gamma->add_option("file", file, "problem file")->required();
    gamma->add_option("--length", gopt.length, "number of copies (default n)");
    gamma->add_option("--set", gopt.set, "named subset of b to use");

    auto* oracle = app.add_subcommand("oracle", "run only the template oracle");
    henson::OracleOptions oopt;
    oracle->add_option("file", file, "problem file")->required();
    oracle->add_flag("--t0", oopt.t0, "use the random-graph theory");
    oracle->add_option("--lmax", l_max, "sequence length");

    auto* ex = app.add_subcommand("example62", "verify the forking but non-dividing disjunction");
    int ex_n = 3;
    ex->add_option("n", ex_n, "clique bound n")->required();
    ex->add_option("--lmax", l_max, "sequence length (default max(6, n+1))");

    auto* lemma = app.add_subcommand("lemma61", "scan all four-position templates");

    auto* fuzz = app.add_subcommand("fuzz", "random criterion-versus-oracle checks");
    henson::FuzzOptions fopt;
    std::string replay_dir = fopt.replay_dir.string();
    fuzz->add_option("--n", fopt.n, "clique bound n");
    fuzz->add_option("--trials", fopt.trials, "number of instances");
    fuzz->add_option("--seed", fopt.seed, "random seed");
    fuzz->add_option("--max-vertices", fopt.max_vertices, "largest ambient graph");
    fuzz->add_option("--replay-dir", replay_dir, "where failing instances are written");
    fuzz->add_flag("--inject-bug", fopt.inject_bug, "mutation hook: drop kn-phi-bound verdicts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        auto code = app.exit(e);
        return code == 0 ? 0 : henson::exit_input;
    }

    auto& out = std::cout;
    auto& err = std::cerr;
    if (*divides) {
        dopt.l_max = l_max;
        return with_problem(file, [&](const auto& p) { return henson::cmd_divides(p, dopt, out, err); });
    }
    if (*indep) {
        iopt.l_max = l_max;
        return with_problem(file, [&](const auto& p) { return henson::cmd_indep(p, iopt, out, err); });
    }
    if (*gamma)
        return with_problem(file, [&](const auto& p) { return henson::cmd_gamma(p, gopt, out, err); });
    if (*oracle) {
        oopt.l_max = l_max;
        return with_problem(file, [&](const auto& p) { return henson::cmd_oracle(p, oopt, out, err); });
    }
    if (*ex)
        return henson::cmd_example62(ex_n, l_max, out, err);
    if (*lemma)
        return henson::cmd_lemma61(out, err);
    if (*fuzz) {
        fopt.replay_dir = replay_dir;
        return henson::cmd_fuzz(fopt, out, err);
    }
    return henson::exit_input;
}
