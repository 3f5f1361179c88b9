#ifndef CTD_DSL_HPP
#define CTD_DSL_HPP

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ctd/closure.hpp"
#include "ctd/json_io.hpp"
#include "ctd/lemmas.hpp"
#include "ctd/models.hpp"
#include "ctd/search.hpp"

// The .ctd script language.
//
//   script  := stmt*
//   stmt    := "worlds" IDENT+
//            | "set" IDENT "=" setexpr
//            | "model" IDENT "=" (ctor | obliteral)
//            | "premise" ("ob" setexpr "in" setexpr | "ought" setexpr "given" setexpr)
//            | "system" (PRESET | AXIOM+)
//            | query
//   query   := "check" | "classify"
//            | "closure" ["goal" setexpr "in" setexpr]
//            | "independence" AXIOM+ "minus" AXIOM
//            | "lemma" LEMMA_ID
//            | "enumerate"
//   setexpr := "{" IDENT* "}" | IDENT          (a previously bound set name)
//   ctor    := "canon2" "(" setexpr "," setexpr ")"
//            | "canon2_II" "(" setexpr "," setexpr ")"
//            | "avoidOnly" "(" IDENT ")" | "avoidNone" | "noObligations"
//   obliteral := "{" ("ob" setexpr ":" setexpr*)* "}"
//
// Comments run from '#' to end of line. Worlds are declared exactly once and
// before use; names are bound before reference; unknown axiom names,
// duplicate worlds, and sets over undeclared worlds are parse-time errors.
// Unlisted contexts in an obliteral default to the empty family.

namespace ctd::dsl {

struct ParseError {
    int line = 0;    // 1-based
    int column = 0;  // 1-based
    std::string message;
    std::string token;

    std::string to_string() const {
        return std::to_string(line) + ":" + std::to_string(column) + ": " + message +
               (token.empty() ? "" : " (at '" + token + "')");
    }
};

struct WorldsStmt {
    std::vector<std::string> names;
    friend bool operator==(const WorldsStmt&, const WorldsStmt&) = default;
};
struct SetStmt {
    std::string name;
    StateSet value;
    friend bool operator==(const SetStmt&, const SetStmt&) = default;
};
struct CtorCall {
    std::string ctor;  // canon2 | canon2_II | avoidOnly | avoidNone | noObligations
    std::vector<StateSet> set_args;
    std::optional<WorldId> world_arg;
    friend bool operator==(const CtorCall&, const CtorCall&) = default;
};
struct ObLiteral {
    // Canonicalized on construction: contexts ascending, no empty families.
    std::vector<std::pair<StateSet, std::vector<StateSet>>> entries;
    friend bool operator==(const ObLiteral&, const ObLiteral&) = default;
};
using ModelExpr = std::variant<CtorCall, ObLiteral>;
struct ModelStmt {
    std::string name;
    ModelExpr expr;
    friend bool operator==(const ModelStmt&, const ModelStmt&) = default;
};
struct PremiseStmt {
    Premise premise;
    friend bool operator==(const PremiseStmt&, const PremiseStmt&) = default;
};
struct SystemStmt {
    std::optional<std::string> preset;  // set for preset systems
    std::vector<AxiomId> axioms;        // resolved list (also for presets)
    friend bool operator==(const SystemStmt&, const SystemStmt&) = default;
};
struct CheckStmt {
    friend bool operator==(const CheckStmt&, const CheckStmt&) = default;
};
struct ClassifyStmt {
    friend bool operator==(const ClassifyStmt&, const ClassifyStmt&) = default;
};
struct ClosureStmt {
    std::optional<Statement> goal;
    friend bool operator==(const ClosureStmt&, const ClosureStmt&) = default;
};
struct IndependenceStmt {
    std::vector<AxiomId> hold;
    AxiomId fail = AxiomId::A5a;
    friend bool operator==(const IndependenceStmt&, const IndependenceStmt&) = default;
};
struct LemmaStmt {
    std::string id;
    friend bool operator==(const LemmaStmt&, const LemmaStmt&) = default;
};
struct EnumerateStmt {
    friend bool operator==(const EnumerateStmt&, const EnumerateStmt&) = default;
};

using Stmt = std::variant<WorldsStmt, SetStmt, ModelStmt, PremiseStmt, SystemStmt, CheckStmt,
                          ClassifyStmt, ClosureStmt, IndependenceStmt, LemmaStmt, EnumerateStmt>;

struct Script {
    std::vector<std::string> worlds;
    std::vector<Stmt> stmts;  // includes the worlds statement

    int n() const { return static_cast<int>(worlds.size()); }
    friend bool operator==(const Script&, const Script&) = default;
};

namespace detail {

struct Token {
    enum class Kind { Word, LBrace, RBrace, Equals, LParen, RParen, Comma, Colon, End };
    Kind kind = Kind::End;
    std::string text;
    int line = 1, column = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skip_ws();
        Token t;
        t.line = line_;
        t.column = col_;
        if (pos_ >= src_.size()) return t;
        const char c = src_[pos_];
        auto punct = [&](Token::Kind k) {
            t.kind = k;
            t.text = std::string(1, c);
            advance();
            return t;
        };
        switch (c) {
            case '{': return punct(Token::Kind::LBrace);
            case '}': return punct(Token::Kind::RBrace);
            case '=': return punct(Token::Kind::Equals);
            case '(': return punct(Token::Kind::LParen);
            case ')': return punct(Token::Kind::RParen);
            case ',': return punct(Token::Kind::Comma);
            case ':': return punct(Token::Kind::Colon);
            default: break;
        }
        if (is_word_char(c)) {
            t.kind = Token::Kind::Word;
            while (pos_ < src_.size() && is_word_char(src_[pos_])) {
                t.text += src_[pos_];
                advance();
            }
            return t;
        }
        t.kind = Token::Kind::Word;
        t.text = std::string(1, c);
        return t;  // parser reports it as unexpected
    }

private:
    static bool is_word_char(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
               c == '_' || c == '.' || c == '-';
    }
    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }
    void skip_ws() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else {
                break;
            }
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
};

struct ParseFail {
    ParseError err;
};

class Parser {
public:
    explicit Parser(std::string_view src) : lexer_(src) { shift(); }

    Script parse_script() {
        Script script;
        bool have_worlds = false;
        while (cur_.kind != Token::Kind::End) {
            const Token at = cur_;
            const std::string kw = expect_word("statement keyword");
            if (kw == "worlds") {
                if (have_worlds) fail(at, "duplicate worlds declaration");
                parse_worlds(script, at.line);
                have_worlds = true;
                continue;
            }
            if (!have_worlds) fail(at, "worlds must be declared before '" + kw + "'");
            if (kw == "set")
                parse_set(script);
            else if (kw == "model")
                parse_model(script);
            else if (kw == "premise")
                parse_premise(script);
            else if (kw == "system")
                parse_system(script);
            else if (kw == "check")
                script.stmts.push_back(CheckStmt{});
            else if (kw == "classify")
                script.stmts.push_back(ClassifyStmt{});
            else if (kw == "closure")
                parse_closure(script);
            else if (kw == "independence")
                parse_independence(script);
            else if (kw == "lemma")
                parse_lemma(script);
            else if (kw == "enumerate")
                script.stmts.push_back(EnumerateStmt{});
            else
                fail(at, "unknown statement '" + kw + "'");
        }
        return script;
    }

private:
    [[noreturn]] void fail(const Token& t, const std::string& message) {
        throw ParseFail{ParseError{t.line, t.column, message, t.text}};
    }
    void shift() { cur_ = lexer_.next(); }

    bool at_word(std::string_view w) const {
        return cur_.kind == Token::Kind::Word && cur_.text == w;
    }
    std::string expect_word(const std::string& what) {
        if (cur_.kind != Token::Kind::Word) fail(cur_, "expected " + what);
        std::string w = cur_.text;
        shift();
        return w;
    }
    void expect(Token::Kind k, const std::string& what) {
        if (cur_.kind != k) fail(cur_, "expected " + what);
        shift();
    }

    static bool is_keyword(std::string_view s) {
        static const char* const kw[] = {"worlds",  "set",     "model",        "premise",
                                         "system",  "check",   "classify",     "closure",
                                         "lemma",   "enumerate", "independence"};
        for (const char* k : kw)
            if (s == k) return true;
        return false;
    }

    static bool is_ident(std::string_view s) {
        if (s.empty()) return false;
        if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
        for (char c : s)
            if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
        return true;
    }

    WorldId world_index(const Token& at, const std::string& name) {
        for (std::size_t i = 0; i < worlds_.size(); ++i)
            if (worlds_[i] == name) return static_cast<WorldId>(i);
        fail(at, "undeclared world '" + name + "'");
    }

    // The name list ends at the line break (or at the next keyword), so a
    // misspelled statement below is not swallowed as a world name.
    void parse_worlds(Script& script, int decl_line) {
        WorldsStmt w;
        while (cur_.kind == Token::Kind::Word && !is_keyword(cur_.text) &&
               cur_.line == decl_line) {
            const Token at = cur_;
            const std::string name = expect_word("world name");
            if (!is_ident(name)) fail(at, "invalid world name '" + name + "'");
            for (const auto& existing : w.names)
                if (existing == name) fail(at, "duplicate world '" + name + "'");
            w.names.push_back(name);
        }
        if (w.names.empty()) fail(cur_, "expected at least one world name");
        if (w.names.size() > static_cast<std::size_t>(kMaxWorlds))
            fail(cur_, "at most " + std::to_string(kMaxWorlds) + " worlds are supported");
        worlds_ = w.names;
        script.worlds = w.names;
        script.stmts.push_back(std::move(w));
    }

    StateSet parse_setexpr() {
        const int n = static_cast<int>(worlds_.size());
        if (cur_.kind == Token::Kind::LBrace) {
            shift();
            StateSet s = StateSet::empty_set(n);
            while (cur_.kind == Token::Kind::Word) {
                const Token at = cur_;
                s = s.with(world_index(at, expect_word("world name")));
            }
            expect(Token::Kind::RBrace, "'}'");
            return s;
        }
        if (cur_.kind == Token::Kind::Word) {
            const Token at = cur_;
            const std::string name = expect_word("set name");
            const auto it = sets_.find(name);
            if (it == sets_.end()) fail(at, "unbound set name '" + name + "'");
            return it->second;
        }
        fail(cur_, "expected a set literal or a bound set name");
    }

    void bindable_name(const Token& at, const std::string& name) {
        if (!is_ident(name) || is_keyword(name)) fail(at, "invalid name '" + name + "'");
        for (const auto& w : worlds_)
            if (w == name) fail(at, "name '" + name + "' is already a world");
    }

    void parse_set(Script& script) {
        const Token at = cur_;
        const std::string name = expect_word("set name");
        bindable_name(at, name);
        if (sets_.count(name)) fail(at, "set '" + name + "' is already bound");
        expect(Token::Kind::Equals, "'='");
        const StateSet value = parse_setexpr();
        sets_.emplace(name, value);
        script.stmts.push_back(SetStmt{name, value});
    }

    void parse_model(Script& script) {
        const Token at = cur_;
        const std::string name = expect_word("model name");
        bindable_name(at, name);
        if (models_.count(name)) fail(at, "model '" + name + "' is already defined");
        expect(Token::Kind::Equals, "'='");
        ModelStmt stmt;
        stmt.name = name;
        if (cur_.kind == Token::Kind::LBrace) {
            stmt.expr = parse_obliteral();
        } else {
            stmt.expr = parse_ctor();
        }
        models_.insert(name);
        script.stmts.push_back(std::move(stmt));
    }

    CtorCall parse_ctor() {
        const Token at = cur_;
        const std::string ctor = expect_word("model constructor");
        CtorCall call;
        call.ctor = ctor;
        if (ctor == "canon2" || ctor == "canon2_II") {
            expect(Token::Kind::LParen, "'('");
            call.set_args.push_back(parse_setexpr());
            expect(Token::Kind::Comma, "','");
            call.set_args.push_back(parse_setexpr());
            expect(Token::Kind::RParen, "')'");
        } else if (ctor == "avoidOnly") {
            expect(Token::Kind::LParen, "'('");
            const Token wt = cur_;
            call.world_arg = world_index(wt, expect_word("world name"));
            expect(Token::Kind::RParen, "')'");
        } else if (ctor == "avoidNone" || ctor == "noObligations") {
            if (cur_.kind == Token::Kind::LParen) {
                shift();
                expect(Token::Kind::RParen, "')'");
            }
        } else {
            fail(at, "unknown model constructor '" + ctor + "'");
        }
        return call;
    }

    ObLiteral parse_obliteral() {
        expect(Token::Kind::LBrace, "'{'");
        std::map<unsigned, std::vector<StateSet>> by_context;
        while (at_word("ob")) {
            shift();
            const StateSet context = parse_setexpr();
            expect(Token::Kind::Colon, "':'");
            auto& members = by_context[context.encoding()];
            while (cur_.kind == Token::Kind::LBrace ||
                   (cur_.kind == Token::Kind::Word && !at_word("ob"))) {
                members.push_back(parse_setexpr());
            }
        }
        expect(Token::Kind::RBrace, "'}' or 'ob'");
        ObLiteral lit;
        const int n = static_cast<int>(worlds_.size());
        for (auto& [enc, members] : by_context) {
            if (members.empty()) continue;  // unlisted/empty contexts default to {}
            std::sort(members.begin(), members.end());
            members.erase(std::unique(members.begin(), members.end()), members.end());
            lit.entries.emplace_back(StateSet(n, enc), std::move(members));
        }
        return lit;
    }

    void parse_premise(Script& script) {
        if (at_word("ob")) {
            shift();
            const StateSet member = parse_setexpr();
            if (!at_word("in")) fail(cur_, "expected 'in'");
            shift();
            const StateSet context = parse_setexpr();
            script.stmts.push_back(PremiseStmt{MembershipPremise{context, member}});
            return;
        }
        if (at_word("ought")) {
            shift();
            const StateSet what = parse_setexpr();
            if (!at_word("given")) fail(cur_, "expected 'given'");
            shift();
            const StateSet given = parse_setexpr();
            script.stmts.push_back(PremiseStmt{OughtPremise{what, given}});
            return;
        }
        fail(cur_, "expected 'ob' or 'ought'");
    }

    AxiomId parse_axiom_name() {
        const Token at = cur_;
        const std::string name = expect_word("axiom name");
        const auto a = axiom_from_string(name);
        if (!a) fail(at, "unknown axiom name '" + name + "'");
        return *a;
    }

    void parse_system(Script& script) {
        SystemStmt stmt;
        const Token at = cur_;
        if (cur_.kind == Token::Kind::Word && AxiomSystem::is_preset(cur_.text)) {
            stmt.preset = cur_.text;
            stmt.axioms = AxiomSystem::preset(cur_.text).axioms();
            shift();
        } else {
            while (cur_.kind == Token::Kind::Word && axiom_from_string(cur_.text)) {
                stmt.axioms.push_back(*axiom_from_string(cur_.text));
                shift();
            }
            if (stmt.axioms.empty())
                fail(at, "expected a preset name or a list of axiom names");
            try {
                AxiomSystem::of("adhoc", stmt.axioms);
            } catch (const Error& e) {
                fail(at, e.what());
            }
        }
        script.stmts.push_back(std::move(stmt));
    }

    void parse_closure(Script& script) {
        ClosureStmt stmt;
        if (at_word("goal")) {
            shift();
            const StateSet member = parse_setexpr();
            if (!at_word("in")) fail(cur_, "expected 'in'");
            shift();
            const StateSet context = parse_setexpr();
            stmt.goal = Statement{context, member};
        }
        script.stmts.push_back(std::move(stmt));
    }

    void parse_independence(Script& script) {
        IndependenceStmt stmt;
        const Token at = cur_;
        while (cur_.kind == Token::Kind::Word && !at_word("minus")) stmt.hold.push_back(parse_axiom_name());
        if (stmt.hold.empty()) fail(at, "expected axiom names before 'minus'");
        if (!at_word("minus")) fail(cur_, "expected 'minus'");
        shift();
        stmt.fail = parse_axiom_name();
        for (AxiomId a : stmt.hold)
            if (a == stmt.fail) fail(at, "the failing axiom also appears in the hold list");
        script.stmts.push_back(std::move(stmt));
    }

    void parse_lemma(Script& script) {
        const Token at = cur_;
        const std::string id = expect_word("lemma id");
        if (!find_lemma(id)) fail(at, "unknown lemma '" + id + "'");
        script.stmts.push_back(LemmaStmt{id});
    }

    Lexer lexer_;
    Token cur_;
    std::vector<std::string> worlds_;
    std::map<std::string, StateSet> sets_;
    std::set<std::string> models_;
};

}  // namespace detail

inline std::variant<Script, ParseError> parse(std::string_view source) {
    try {
        detail::Parser p(source);
        return p.parse_script();
    } catch (const detail::ParseFail& f) {
        return f.err;
    }
}

/// Canonical printer; parse(print(s)) reproduces s exactly. Sets are printed
/// as literals over world names in declaration order.
inline std::string print(const Script& script) {
    std::ostringstream out;
    auto set_text = [&](StateSet s) {
        std::string t = "{";
        bool first = true;
        for (int w = 0; w < s.n(); ++w) {
            if (!s.contains(w)) continue;
            if (!first) t += " ";
            t += script.worlds.at(w);
            first = false;
        }
        return t + "}";
    };
    auto axiom_list = [&](const std::vector<AxiomId>& axioms) {
        std::string t;
        for (std::size_t i = 0; i < axioms.size(); ++i)
            t += std::string(i ? " " : "") + to_string(axioms[i]);
        return t;
    };
    for (const Stmt& stmt : script.stmts) {
        std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, WorldsStmt>) {
                    out << "worlds";
                    for (const auto& w : s.names) out << " " << w;
                } else if constexpr (std::is_same_v<T, SetStmt>) {
                    out << "set " << s.name << " = " << set_text(s.value);
                } else if constexpr (std::is_same_v<T, ModelStmt>) {
                    out << "model " << s.name << " = ";
                    if (const auto* ctor = std::get_if<CtorCall>(&s.expr)) {
                        out << ctor->ctor;
                        if (ctor->ctor == "canon2" || ctor->ctor == "canon2_II")
                            out << "(" << set_text(ctor->set_args[0]) << ", "
                                << set_text(ctor->set_args[1]) << ")";
                        else if (ctor->ctor == "avoidOnly")
                            out << "(" << script.worlds.at(*ctor->world_arg) << ")";
                    } else {
                        const auto& lit = std::get<ObLiteral>(s.expr);
                        out << "{";
                        for (const auto& [context, members] : lit.entries) {
                            out << " ob " << set_text(context) << ":";
                            for (StateSet m : members) out << " " << set_text(m);
                        }
                        out << " }";
                    }
                } else if constexpr (std::is_same_v<T, PremiseStmt>) {
                    if (const auto* m = std::get_if<MembershipPremise>(&s.premise))
                        out << "premise ob " << set_text(m->member) << " in "
                            << set_text(m->context);
                    else {
                        const auto& o = std::get<OughtPremise>(s.premise);
                        out << "premise ought " << set_text(o.what) << " given "
                            << set_text(o.given);
                    }
                } else if constexpr (std::is_same_v<T, SystemStmt>) {
                    out << "system " << (s.preset ? *s.preset : axiom_list(s.axioms));
                } else if constexpr (std::is_same_v<T, CheckStmt>) {
                    out << "check";
                } else if constexpr (std::is_same_v<T, ClassifyStmt>) {
                    out << "classify";
                } else if constexpr (std::is_same_v<T, ClosureStmt>) {
                    out << "closure";
                    if (s.goal)
                        out << " goal " << set_text(s.goal->member) << " in "
                            << set_text(s.goal->context);
                } else if constexpr (std::is_same_v<T, IndependenceStmt>) {
                    out << "independence " << axiom_list(s.hold) << " minus "
                        << to_string(s.fail);
                } else if constexpr (std::is_same_v<T, LemmaStmt>) {
                    out << "lemma " << s.id;
                } else if constexpr (std::is_same_v<T, EnumerateStmt>) {
                    out << "enumerate";
                }
            },
            stmt);
        out << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Execution

struct RunFlags {
    bool fail_fast = false;
    std::uint64_t seed = 0;
    std::uint64_t budget = 200'000'000;
    int max_n = 4;
    int workers = 1;
    int list_limit = 100;                       // models printed per enumerate
    std::uint64_t lemma_target_instances = 10000;
    CheckOptions check_options;                 // 5d variant / 5g formula
    CanonOrder canon_order = CanonOrder::BTestFirst;
};

struct ReportSection {
    std::string kind;
    std::string title;
    bool ok = true;
    bool budget_exhausted = false;
    std::optional<std::string> error;
    std::vector<std::string> lines;  // human-readable detail
    nlohmann::json details = nlohmann::json::object();
};

struct Report {
    std::vector<std::string> worlds;
    std::vector<ReportSection> sections;

    bool all_ok() const {
        for (const auto& s : sections)
            if (!s.ok) return false;
        return true;
    }
    bool any_budget_exhausted() const {
        for (const auto& s : sections)
            if (s.budget_exhausted) return true;
        return false;
    }
    /// 0 success, 1 failed check/query, 3 budget exhausted.
    int exit_code() const { return !all_ok() ? 1 : (any_budget_exhausted() ? 3 : 0); }
};

inline nlohmann::json report_to_json(const Report& r) {
    nlohmann::json j;
    j["worlds"] = r.worlds;
    j["passed"] = r.all_ok();
    j["budget_exhausted"] = r.any_budget_exhausted();
    j["sections"] = nlohmann::json::array();
    for (const auto& s : r.sections) {
        nlohmann::json sj;
        sj["kind"] = s.kind;
        sj["title"] = s.title;
        sj["ok"] = s.ok;
        sj["budget_exhausted"] = s.budget_exhausted;
        sj["error"] = s.error ? nlohmann::json(*s.error) : nlohmann::json(nullptr);
        sj["details"] = s.details;
        j["sections"].push_back(std::move(sj));
    }
    return j;
}

inline std::string render_text(const Report& r) {
    std::ostringstream out;
    for (const auto& s : r.sections) {
        out << "== " << s.title << ": " << (s.ok ? "ok" : "FAIL");
        if (s.budget_exhausted) out << " (budget exhausted)";
        out << "\n";
        if (s.error) out << "   error: " << *s.error << "\n";
        for (const auto& line : s.lines) out << "   " << line << "\n";
    }
    out << (r.all_ok() ? "PASS" : "FAIL") << "\n";
    return out.str();
}

namespace detail {

class Runner {
public:
    Runner(const Script& script, const RunFlags& flags) : script_(script), flags_(flags) {
        names_ = script.worlds;
        n_ = script.n();
    }

    Report run() {
        Report report;
        report.worlds = names_;
        for (const Stmt& stmt : script_.stmts) {
            ReportSection section;
            bool is_query = false;
            try {
                is_query = execute(stmt, section);
            } catch (const Error& e) {
                section.ok = false;
                section.error = e.what();
                is_query = true;
            }
            if (is_query) {
                section.title = section.kind + " #" + std::to_string(++query_counter_);
                report.sections.push_back(std::move(section));
                if (flags_.fail_fast && !report.sections.back().ok) break;
            }
        }
        return report;
    }

private:
    SearchBudget budget() const {
        SearchBudget b;
        b.max_expansions = flags_.budget;
        b.seed = flags_.seed;
        return b;
    }

    std::string set_text(StateSet s) const {
        std::string t = "{";
        bool first = true;
        for (int w = 0; w < s.n(); ++w) {
            if (!s.contains(w)) continue;
            if (!first) t += " ";
            t += names_.at(w);
            first = false;
        }
        return t + "}";
    }

    std::string model_text(const ObModel& m) const {
        std::string t = "{";
        for (int x = 0; x < m.context_count(); ++x) {
            const Family& fam = m.family_at(x);
            if (fam.empty()) continue;
            t += " ob " + set_text(StateSet(m.n(), x)) + ":";
            fam.for_each([&](StateSet y) { t += " " + set_text(y); });
        }
        return t + " }";
    }

    ObModel eval_model(const ModelExpr& expr) const {
        if (const auto* lit = std::get_if<ObLiteral>(&expr)) {
            ObModel m(n_);
            for (const auto& [context, members] : lit->entries)
                for (StateSet y : members) m.insert(context, y);
            return m;
        }
        const auto& ctor = std::get<CtorCall>(expr);
        if (ctor.ctor == "canon2")
            return canon2(n_, ctor.set_args[0], ctor.set_args[1], flags_.canon_order);
        if (ctor.ctor == "canon2_II")
            return canon2_II(n_, ctor.set_args[0], ctor.set_args[1], flags_.canon_order);
        if (ctor.ctor == "avoidOnly") return avoid_only(n_, *ctor.world_arg);
        if (ctor.ctor == "avoidNone") return avoid_none(n_);
        return no_obligations(n_);
    }

    const AxiomSystem& require_system() const {
        if (!system_) throw Error("no axiom system selected (use 'system ...')");
        return *system_;
    }

    // Returns true when the statement produced a report section.
    bool execute(const Stmt& stmt, ReportSection& section) {
        return std::visit(
            [&](const auto& s) -> bool {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, WorldsStmt>) {
                    return false;
                } else if constexpr (std::is_same_v<T, SetStmt>) {
                    return false;
                } else if constexpr (std::is_same_v<T, ModelStmt>) {
                    models_.emplace_back(s.name, eval_model(s.expr));
                    return false;
                } else if constexpr (std::is_same_v<T, PremiseStmt>) {
                    premises_.push_back(s.premise);
                    return false;
                } else if constexpr (std::is_same_v<T, SystemStmt>) {
                    system_ = s.preset ? AxiomSystem::preset(*s.preset)
                                       : AxiomSystem::of("adhoc", s.axioms);
                    return false;
                } else if constexpr (std::is_same_v<T, CheckStmt>) {
                    run_check(section);
                    return true;
                } else if constexpr (std::is_same_v<T, ClassifyStmt>) {
                    run_classify(section);
                    return true;
                } else if constexpr (std::is_same_v<T, ClosureStmt>) {
                    run_closure(s, section);
                    return true;
                } else if constexpr (std::is_same_v<T, IndependenceStmt>) {
                    section = independence_section(s.hold, s.fail, flags_, names_);
                    return true;
                } else if constexpr (std::is_same_v<T, LemmaStmt>) {
                    section = lemma_section(s.id, n_, flags_, names_);
                    return true;
                } else if constexpr (std::is_same_v<T, EnumerateStmt>) {
                    run_enumerate(section);
                    return true;
                }
                return false;
            },
            stmt);
    }

    void run_check(ReportSection& section) {
        section.kind = "check";
        const AxiomSystem& system = require_system();
        if (models_.empty()) throw Error("no models defined before 'check'");
        section.details["system"] = system.name();
        section.details["models"] = nlohmann::json::array();
        for (const auto& [name, model] : models_) {
            const SatisfactionReport r = satisfies(model, system, flags_.check_options);
            nlohmann::json mj;
            mj["model"] = name;
            mj["pass"] = r.pass();
            mj["violations"] = nlohmann::json::array();
            std::string line = name + ": " + (r.pass() ? "pass" : "FAIL");
            for (const auto& [axiom, violation] : r.entries) {
                if (!violation) continue;
                line += std::string(" [") + to_string(axiom) + " " +
                        violation_text(*violation) + "]";
                mj["violations"].push_back(violation_to_json(*violation, names_));
            }
            section.lines.push_back(line);
            section.details["models"].push_back(std::move(mj));
            section.ok = section.ok && r.pass();
        }
    }

    void run_classify(ReportSection& section) {
        section.kind = "classify";
        if (models_.empty()) throw Error("no models defined before 'classify'");
        section.details["models"] = nlohmann::json::array();
        for (const auto& [name, model] : models_) {
            Classification c = classify(model);
            std::string label = c.to_string();
            if (c.kind == Classification::Kind::AvoidOnly)
                label = "avoidOnly(" + names_.at(c.world) + ")";
            section.lines.push_back(name + ": " + label);
            section.details["models"].push_back({{"model", name}, {"classification", label}});
        }
    }

    void run_closure(const ClosureStmt& stmt, ReportSection& section) {
        section.kind = "closure";
        const AxiomSystem& system = require_system();
        const RuleSet rules = RuleSet::from_system(system);
        ClosureOptions opts;
        opts.five_d = flags_.check_options.five_d;
        section.details["rules"] = nlohmann::json::array();
        for (RuleId r : rules.to_vector()) section.details["rules"].push_back(to_string(r));
        if (stmt.goal) {
            const auto derivation = derive(n_, premises_, rules, *stmt.goal, opts);
            section.details["goal"] = statement_to_json(*stmt.goal, names_);
            if (!derivation) {
                section.ok = false;
                section.lines.push_back("goal " + set_text(stmt.goal->member) + " in ob(" +
                                        set_text(stmt.goal->context) + "): not derivable");
                section.details["derivable"] = false;
                return;
            }
            section.details["derivable"] = true;
            section.details["derivation"] = derivation_to_json(*derivation, names_);
            section.lines.push_back("goal " + set_text(stmt.goal->member) + " in ob(" +
                                    set_text(stmt.goal->context) + "): derived in " +
                                    std::to_string(derivation->steps.size()) + " steps");
            for (std::size_t i = 0; i < derivation->steps.size(); ++i) {
                const DerivationStep& st = derivation->steps[i];
                std::string line = std::to_string(i) + ". " + set_text(st.statement.member) +
                                   " in ob(" + set_text(st.statement.context) + ")  [";
                if (st.premise) {
                    line += "premise " + std::to_string(*st.premise);
                } else {
                    line += to_string(*st.rule);
                    for (int a : st.antecedents) line += " " + std::to_string(a);
                }
                line += "]";
                section.lines.push_back(line);
            }
        } else {
            const ObModel m = least_model(n_, premises_, rules, opts);
            section.lines.push_back("least model: " + model_text(m));
            section.details["least_model"] = model_to_json(m, names_);
        }
    }

    void run_enumerate(ReportSection& section) {
        section.kind = "enumerate";
        const AxiomSystem& system = require_system();
        std::vector<ObModel> models;
        const EnumerationResult stats = enumerate_models(
            n_, system,
            [&](const ObModel& m) {
                models.push_back(m);
                return true;
            },
            budget(), flags_.check_options, flags_.workers);
        section.budget_exhausted = stats.budget_exhausted;
        section.lines.push_back(std::to_string(models.size()) + " models of " + system.name() +
                                " at n=" + std::to_string(n_) +
                                (stats.complete ? "" : " (incomplete)"));
        section.details["system"] = system.name();
        section.details["count"] = models.size();
        section.details["complete"] = stats.complete;
        section.details["models"] = nlohmann::json::array();
        const int limit = flags_.list_limit;
        for (std::size_t i = 0; i < models.size() && static_cast<int>(i) < limit; ++i) {
            section.lines.push_back(model_text(models[i]));
            section.details["models"].push_back(model_to_json(models[i], names_));
        }
        if (static_cast<int>(models.size()) > limit)
            section.lines.push_back("... and " + std::to_string(models.size() - limit) + " more");
    }

    std::string violation_text(const Violation& v) const {
        std::string t = "X=" + set_text(v.x);
        if (v.y) t += " Y=" + set_text(*v.y);
        if (v.z) t += " Z=" + set_text(*v.z);
        return t;
    }

    const Script& script_;
    const RunFlags& flags_;
    std::vector<std::string> names_;
    int n_ = 0;
    std::vector<std::pair<std::string, ObModel>> models_;
    std::vector<Premise> premises_;
    std::optional<AxiomSystem> system_;
    int query_counter_ = 0;

public:
    /// Shared by script execution and the CLI's inline modes.
    static ReportSection independence_section(const std::vector<AxiomId>& hold, AxiomId fail,
                                              const RunFlags& flags,
                                              const std::vector<std::string>& names) {
        ReportSection section;
        section.kind = "independence";
        SearchBudget b;
        b.max_expansions = flags.budget;
        b.seed = flags.seed;
        const IndependenceResult r =
            find_independence_witness(hold, fail, flags.max_n, b, flags.check_options);
        std::string holds;
        for (AxiomId a : hold) holds += std::string(holds.empty() ? "" : " ") + to_string(a);
        section.details["hold"] = nlohmann::json::array();
        for (AxiomId a : hold) section.details["hold"].push_back(to_string(a));
        section.details["fail"] = to_string(fail);
        section.details["nodes"] = r.nodes;
        if (!r.note.empty()) section.details["note"] = r.note;
        switch (r.status) {
            case IndependenceResult::Status::Found: {
                const auto witness_names =
                    static_cast<int>(names.size()) >= r.n
                        ? std::vector<std::string>(names.begin(), names.begin() + r.n)
                        : default_world_names(r.n);
                section.details["status"] = "found";
                section.details["n"] = r.n;
                section.details["model"] = model_to_json(*r.model, witness_names);
                section.details["violation"] = violation_to_json(*r.violation, witness_names);
                section.lines.push_back("witness at n=" + std::to_string(r.n) + " for {" + holds +
                                        "} minus " + to_string(fail));
                section.lines.push_back("model: " + model_json_text(*r.model, witness_names));
                break;
            }
            case IndependenceResult::Status::NoneExists:
                section.ok = false;
                section.details["status"] = "none";
                section.lines.push_back("no witness exists at n <= " +
                                        std::to_string(flags.max_n) + " (exhaustive)");
                break;
            case IndependenceResult::Status::Inconclusive:
                section.ok = false;
                section.budget_exhausted = !r.note.empty() && r.note.find("budget") != std::string::npos;
                section.details["status"] = "inconclusive";
                section.lines.push_back("inconclusive at n <= " + std::to_string(flags.max_n) +
                                        (r.note.empty() ? "" : " (" + r.note + ")"));
                break;
        }
        return section;
    }

    static ReportSection lemma_section(const std::string& id, int n, const RunFlags& flags,
                                       const std::vector<std::string>& names) {
        ReportSection section;
        section.kind = "lemma";
        SearchBudget b;
        b.max_expansions = flags.budget;
        b.seed = flags.seed;
        const LemmaReport r =
            verify_lemma(id, n, b, flags.lemma_target_instances, flags.check_options);
        section.ok = r.verified();
        section.budget_exhausted = r.shortfall;
        section.details = lemma_report_to_json(r, names);
        std::string line = id + ": ";
        if (r.counterexample) {
            line += "COUNTEREXAMPLE " + model_json_text(r.counterexample->model, names);
        } else {
            line += "verified over " + std::to_string(r.models_checked) + " models / " +
                    std::to_string(r.instances_checked) + " instances" +
                    (r.exhaustive ? " (exhaustive)" : "") + (r.shortfall ? " (shortfall)" : "");
        }
        section.lines.push_back(line);
        return section;
    }

private:
    static std::string model_json_text(const ObModel& m, const std::vector<std::string>& names) {
        std::string t = "{";
        for (int x = 0; x < m.context_count(); ++x) {
            const Family& fam = m.family_at(x);
            if (fam.empty()) continue;
            t += " ob " + set_json_text(StateSet(m.n(), x), names) + ":";
            fam.for_each([&](StateSet y) { t += " " + set_json_text(y, names); });
        }
        return t + " }";
    }
    static std::string set_json_text(StateSet s, const std::vector<std::string>& names) {
        std::string t = "{";
        bool first = true;
        for (int w = 0; w < s.n(); ++w) {
            if (!s.contains(w)) continue;
            if (!first) t += " ";
            t += names.at(w);
            first = false;
        }
        return t + "}";
    }
};

}  // namespace detail

inline Report run(const Script& script, const RunFlags& flags = {}) {
    return detail::Runner(script, flags).run();
}

/// Inline-query entry points used by the CLI (no script required). Errors
/// render as failed sections, matching script execution.
inline ReportSection run_independence_query(const std::vector<AxiomId>& hold, AxiomId fail,
                                            const RunFlags& flags,
                                            const std::vector<std::string>& names = {}) {
    try {
        return detail::Runner::independence_section(hold, fail, flags, names);
    } catch (const Error& e) {
        ReportSection section;
        section.kind = "independence";
        section.ok = false;
        section.error = e.what();
        return section;
    }
}

inline ReportSection run_lemma_query(const std::string& id, int n, const RunFlags& flags,
                                     const std::vector<std::string>& names) {
    try {
        return detail::Runner::lemma_section(id, n, flags, names);
    } catch (const Error& e) {
        ReportSection section;
        section.kind = "lemma";
        section.ok = false;
        section.error = e.what();
        return section;
    }
}

}  // namespace ctd::dsl

#endif  // CTD_DSL_HPP
