// ctd - a finite-model laboratory for conditional-obligation semantics.
//
// Verbs mirror the script queries:
//   ctd check|classify|closure|enumerate|independence|lemma|anomaly
// each taking --script FILE or inline flags; see --help.
// Exit codes: 0 success, 1 failed check or missing witness, 2 parse error,
// 3 budget exhausted.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ctd/ctd.hpp"

namespace {

struct CommonArgs {
    std::string script_path;
    std::string worlds;
    std::string system;
    bool json = false;
    bool fail_fast = false;
    std::uint64_t seed = 0;
    std::uint64_t budget = 200'000'000;
    int max_n = 4;
    int workers = 1;
    int limit = 100;
    std::uint64_t target_instances = 10000;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_script = true) {
    if (with_script) cmd->add_option("--script", args.script_path, "run a .ctd script file");
    cmd->add_option("--worlds", args.worlds,
                    "world names (\"a b c\") or a count (auto-named w0..)");
    cmd->add_option("--system", args.system, "axiom system: preset name or axiom list");
    cmd->add_flag("--json", args.json, "emit the JSON report");
    cmd->add_flag("--fail-fast", args.fail_fast, "stop at the first failing query");
    cmd->add_option("--seed", args.seed, "random seed for sampled searches");
    cmd->add_option("--budget", args.budget, "search budget (node expansions)");
    cmd->add_option("--max-n", args.max_n, "largest model size for searches");
    cmd->add_option("--workers", args.workers, "worker threads for raw enumeration");
    cmd->add_option("--limit", args.limit, "models listed per enumerate query");
    cmd->add_option("--target-instances", args.target_instances,
                    "sampled-instance target for lemma checks at n=3");
}

ctd::dsl::RunFlags to_flags(const CommonArgs& args) {
    ctd::dsl::RunFlags flags;
    flags.fail_fast = args.fail_fast;
    flags.seed = args.seed;
    flags.budget = args.budget;
    flags.max_n = args.max_n;
    flags.workers = args.workers;
    flags.list_limit = args.limit;
    flags.lemma_target_instances = args.target_instances;
    return flags;
}

std::vector<std::string> parse_worlds_arg(const std::string& arg) {
    std::vector<std::string> names;
    std::istringstream in(arg);
    std::string word;
    while (in >> word) names.push_back(word);
    if (names.size() == 1 && !names[0].empty() &&
        names[0].find_first_not_of("0123456789") == std::string::npos) {
        const int count = std::stoi(names[0]);
        return ctd::default_world_names(count);
    }
    return names;
}

std::vector<ctd::AxiomId> parse_axiom_list(const std::string& arg) {
    if (ctd::AxiomSystem::is_preset(arg)) return ctd::AxiomSystem::preset(arg).axioms();
    std::vector<ctd::AxiomId> out;
    std::istringstream in(arg);
    std::string word;
    while (in >> word) {
        const auto a = ctd::axiom_from_string(word);
        if (!a) throw ctd::Error("unknown axiom name '" + word + "'");
        out.push_back(*a);
    }
    if (out.empty()) throw ctd::Error("empty axiom list");
    return out;
}

int emit(const ctd::dsl::Report& report, bool json) {
    if (json)
        std::cout << ctd::dsl::report_to_json(report).dump(2) << "\n";
    else
        std::cout << ctd::dsl::render_text(report);
    return report.exit_code();
}

/// Loads and parses the script; exits with code 2 on parse errors.
ctd::dsl::Script load_script(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "ctd: cannot open '" << path << "'\n";
        std::exit(2);
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    auto parsed = ctd::dsl::parse(buffer.str());
    if (const auto* err = std::get_if<ctd::dsl::ParseError>(&parsed)) {
        std::cerr << path << ":" << err->to_string() << "\n";
        std::exit(2);
    }
    return std::get<ctd::dsl::Script>(parsed);
}

template <typename Query>
bool has_query(const ctd::dsl::Script& script) {
    for (const auto& s : script.stmts)
        if (std::holds_alternative<Query>(s)) return true;
    return false;
}

/// Builds a script from inline --worlds/--system flags.
ctd::dsl::Script inline_script(const CommonArgs& args) {
    ctd::dsl::Script script;
    if (args.worlds.empty()) throw ctd::Error("--worlds is required without --script");
    ctd::dsl::WorldsStmt w{parse_worlds_arg(args.worlds)};
    if (w.names.empty()) throw ctd::Error("--worlds must name at least one world");
    script.worlds = w.names;
    script.stmts.push_back(std::move(w));
    if (!args.system.empty()) {
        ctd::dsl::SystemStmt sys;
        if (ctd::AxiomSystem::is_preset(args.system)) sys.preset = args.system;
        sys.axioms = parse_axiom_list(args.system);
        script.stmts.push_back(std::move(sys));
    }
    return script;
}

template <typename Query>
int run_script_verb(const CommonArgs& args, Query default_query) {
    ctd::dsl::Script script;
    if (!args.script_path.empty()) {
        script = load_script(args.script_path);
    } else {
        script = inline_script(args);
    }
    if (!has_query<Query>(script)) script.stmts.push_back(std::move(default_query));
    return emit(ctd::dsl::run(script, to_flags(args)), args.json);
}

int run_anomaly(const CommonArgs& args) {
    const ctd::Derivation d = ctd::grades_anomaly();
    const std::vector<std::string> names = {"A", "B", "C", "D", "F"};
    std::string why;
    const bool ok = ctd::check_derivation(d, &why);

    ctd::dsl::Report report;
    report.worlds = names;
    ctd::dsl::ReportSection section;
    section.kind = "anomaly";
    section.title = "anomaly #1";
    section.ok = ok;
    if (!ok) section.error = why;
    section.details["derivation"] = ctd::derivation_to_json(d, names);
    section.details["checked"] = ok;
    auto set_text = [&](ctd::StateSet s) {
        std::string t = "{";
        bool first = true;
        for (int w = 0; w < s.n(); ++w) {
            if (!s.contains(w)) continue;
            t += (first ? "" : " ") + names[w];
            first = false;
        }
        return t + "}";
    };
    for (std::size_t i = 0; i < d.steps.size(); ++i) {
        const auto& st = d.steps[i];
        std::string line = std::to_string(i) + ". " + set_text(st.statement.member) + " in ob(" +
                           set_text(st.statement.context) + ")  [";
        if (st.premise)
            line += "premise " + std::to_string(*st.premise);
        else {
            line += ctd::to_string(*st.rule);
            for (int a : st.antecedents) line += " " + std::to_string(a);
        }
        line += "]";
        section.lines.push_back(line);
    }
    section.lines.push_back(std::string("derivation check: ") + (ok ? "ok" : "FAILED"));
    report.sections.push_back(std::move(section));
    return emit(report, args.json);
}

int run_independence(const CommonArgs& args, const std::string& hold_arg,
                     const std::string& fail_arg) {
    if (!args.script_path.empty()) {
        // Script mode: the script must contain (or we synthesize) the query.
        ctd::dsl::Script script = load_script(args.script_path);
        if (!has_query<ctd::dsl::IndependenceStmt>(script)) {
            if (fail_arg.empty())
                throw ctd::Error("script has no independence query; pass --fail (and --hold)");
            ctd::dsl::IndependenceStmt q;
            const auto fail = ctd::axiom_from_string(fail_arg);
            if (!fail) throw ctd::Error("unknown axiom name '" + fail_arg + "'");
            q.fail = *fail;
            q.hold = parse_axiom_list(hold_arg.empty() ? args.system : hold_arg);
            std::erase(q.hold, q.fail);
            script.stmts.push_back(std::move(q));
        }
        return emit(ctd::dsl::run(script, to_flags(args)), args.json);
    }
    if (fail_arg.empty()) throw ctd::Error("--fail is required");
    const auto fail = ctd::axiom_from_string(fail_arg);
    if (!fail) throw ctd::Error("unknown axiom name '" + fail_arg + "'");
    std::vector<ctd::AxiomId> hold;
    if (!hold_arg.empty())
        hold = parse_axiom_list(hold_arg);
    else if (!args.system.empty())
        hold = parse_axiom_list(args.system);
    else
        throw ctd::Error("pass --hold or --system to define the axioms that must hold");
    std::erase(hold, *fail);

    ctd::dsl::Report report;
    auto section = ctd::dsl::run_independence_query(hold, *fail, to_flags(args));
    section.title = section.kind + " #1";
    report.sections.push_back(std::move(section));
    return emit(report, args.json);
}

int run_lemma(const CommonArgs& args, const std::string& id) {
    if (!args.script_path.empty()) {
        ctd::dsl::Script script = load_script(args.script_path);
        if (!has_query<ctd::dsl::LemmaStmt>(script)) {
            if (id.empty()) throw ctd::Error("script has no lemma query; pass --id");
            if (!ctd::find_lemma(id)) throw ctd::Error("unknown lemma '" + id + "'");
            script.stmts.push_back(ctd::dsl::LemmaStmt{id});
        }
        return emit(ctd::dsl::run(script, to_flags(args)), args.json);
    }
    if (id.empty()) throw ctd::Error("--id is required (try --list)");
    if (args.worlds.empty()) throw ctd::Error("--worlds is required without --script");
    const auto names = parse_worlds_arg(args.worlds);

    ctd::dsl::Report report;
    report.worlds = names;
    auto section =
        ctd::dsl::run_lemma_query(id, static_cast<int>(names.size()), to_flags(args), names);
    section.title = section.kind + " #1";
    report.sections.push_back(std::move(section));
    return emit(report, args.json);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-model laboratory for conditional-obligation semantics"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string hold_arg, fail_arg, lemma_id;
    bool list_lemmas = false;

    auto* check = app.add_subcommand("check", "check models against the selected axiom system");
    add_common(check, args);
    auto* classify = app.add_subcommand("classify", "classify models against the CJ97 families");
    add_common(classify, args);
    auto* closure = app.add_subcommand("closure", "least model / derivation from premises");
    add_common(closure, args);
    auto* enumerate = app.add_subcommand("enumerate", "enumerate all models of a system");
    add_common(enumerate, args);
    auto* independence = app.add_subcommand("independence", "search for an independence witness");
    add_common(independence, args);
    independence->add_option("--hold", hold_arg, "axioms that must hold (list or preset)");
    independence->add_option("--fail", fail_arg, "the axiom that must be violated");
    auto* lemma = app.add_subcommand("lemma", "verify a registered lemma");
    add_common(lemma, args);
    lemma->add_option("--id", lemma_id, "lemma id (see --list)");
    lemma->add_flag("--list", list_lemmas, "list registered lemma ids");
    auto* anomaly = app.add_subcommand("anomaly", "print and check the grades derivation");
    add_common(anomaly, args, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) {
            if (args.script_path.empty()) throw ctd::Error("check requires --script");
            return run_script_verb(args, ctd::dsl::CheckStmt{});
        }
        if (classify->parsed()) {
            if (args.script_path.empty()) throw ctd::Error("classify requires --script");
            return run_script_verb(args, ctd::dsl::ClassifyStmt{});
        }
        if (closure->parsed()) {
            if (args.script_path.empty()) throw ctd::Error("closure requires --script");
            return run_script_verb(args, ctd::dsl::ClosureStmt{});
        }
        if (enumerate->parsed()) return run_script_verb(args, ctd::dsl::EnumerateStmt{});
        if (independence->parsed()) return run_independence(args, hold_arg, fail_arg);
        if (lemma->parsed()) {
            if (list_lemmas) {
                for (const auto& spec : ctd::lemma_registry()) std::cout << spec.id << "\n";
                return 0;
            }
            return run_lemma(args, lemma_id);
        }
        if (anomaly->parsed()) return run_anomaly(args);
    } catch (const ctd::Error& e) {
        std::cerr << "ctd: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
