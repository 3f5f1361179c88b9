#ifndef CTD_JSON_IO_HPP
#define CTD_JSON_IO_HPP

#include <algorithm>
#include <string>
#include <vector>

#include <json.hpp>

#include "ctd/axioms.hpp"
#include "ctd/closure.hpp"
#include "ctd/core.hpp"
#include "ctd/lemmas.hpp"

// JSON wire formats. Sets are arrays of world names (never indices), so
// stored artifacts are insensitive to the internal encoding.

namespace ctd {

inline std::vector<std::string> default_world_names(int n) {
    std::vector<std::string> names;
    names.reserve(n);
    for (int i = 0; i < n; ++i) names.push_back("w" + std::to_string(i));
    return names;
}

inline nlohmann::json set_to_json(StateSet s, const std::vector<std::string>& names) {
    nlohmann::json arr = nlohmann::json::array();
    for (int w = 0; w < s.n(); ++w)
        if (s.contains(w)) arr.push_back(names.at(w));
    return arr;
}

inline StateSet set_from_json(const nlohmann::json& j, const std::vector<std::string>& names) {
    if (!j.is_array()) throw Error("expected a set (array of world names)");
    const int n = static_cast<int>(names.size());
    StateSet s = StateSet::empty_set(n);
    for (const auto& el : j) {
        const std::string name = el.get<std::string>();
        const auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) throw Error("unknown world '" + name + "'");
        s = s.with(static_cast<WorldId>(it - names.begin()));
    }
    return s;
}

inline nlohmann::json statement_to_json(const Statement& s, const std::vector<std::string>& names) {
    return {{"context", set_to_json(s.context, names)}, {"member", set_to_json(s.member, names)}};
}

inline Statement statement_from_json(const nlohmann::json& j,
                                     const std::vector<std::string>& names) {
    return {set_from_json(j.at("context"), names), set_from_json(j.at("member"), names)};
}

inline nlohmann::json premise_to_json(const Premise& p, const std::vector<std::string>& names) {
    if (const auto* m = std::get_if<MembershipPremise>(&p))
        return {{"type", "ob"},
                {"member", set_to_json(m->member, names)},
                {"context", set_to_json(m->context, names)}};
    const auto& o = std::get<OughtPremise>(p);
    return {{"type", "ought"},
            {"what", set_to_json(o.what, names)},
            {"given", set_to_json(o.given, names)}};
}

inline Premise premise_from_json(const nlohmann::json& j, const std::vector<std::string>& names) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "ob")
        return MembershipPremise{set_from_json(j.at("context"), names),
                                 set_from_json(j.at("member"), names)};
    if (type == "ought")
        return OughtPremise{set_from_json(j.at("what"), names),
                            set_from_json(j.at("given"), names)};
    throw Error("unknown premise type '" + type + "'");
}

/// {worlds, premises[], steps[{statement, rule, antecedents[], instantiation}]}
/// Premise-justified steps use rule "premise" with the premise index as the
/// single antecedent.
inline nlohmann::json derivation_to_json(const Derivation& d,
                                         const std::vector<std::string>& names) {
    nlohmann::json j;
    j["worlds"] = names;
    j["premises"] = nlohmann::json::array();
    for (const Premise& p : d.premises) j["premises"].push_back(premise_to_json(p, names));
    j["steps"] = nlohmann::json::array();
    for (const DerivationStep& s : d.steps) {
        nlohmann::json step;
        step["statement"] = statement_to_json(s.statement, names);
        if (s.premise) {
            step["rule"] = "premise";
            step["antecedents"] = {*s.premise};
        } else {
            step["rule"] = to_string(*s.rule);
            step["antecedents"] = s.antecedents;
        }
        if (s.instantiation) step["instantiation"] = set_to_json(*s.instantiation, names);
        j["steps"].push_back(std::move(step));
    }
    return j;
}

inline Derivation derivation_from_json(const nlohmann::json& j) {
    const auto names = j.at("worlds").get<std::vector<std::string>>();
    const int n = static_cast<int>(names.size());
    if (n > kMaxWorlds) throw Error("too many worlds");
    Derivation d;
    d.n = n;
    for (const auto& p : j.at("premises")) d.premises.push_back(premise_from_json(p, names));
    for (const auto& sj : j.at("steps")) {
        DerivationStep s;
        s.statement = statement_from_json(sj.at("statement"), names);
        const std::string rule = sj.at("rule").get<std::string>();
        const auto ants = sj.at("antecedents").get<std::vector<int>>();
        if (rule == "premise") {
            if (ants.size() != 1) throw Error("premise step takes one premise index");
            s.premise = ants[0];
        } else {
            const auto r = rule_from_string(rule);
            if (!r) throw Error("unknown rule '" + rule + "'");
            s.rule = *r;
            s.antecedents = ants;
        }
        if (sj.contains("instantiation")) s.instantiation = set_from_json(sj["instantiation"], names);
        d.steps.push_back(std::move(s));
    }
    return d;
}

inline std::vector<std::string> derivation_world_names(const nlohmann::json& j) {
    return j.at("worlds").get<std::vector<std::string>>();
}

/// Sparse model rendering: only nonempty contexts are listed.
inline nlohmann::json model_to_json(const ObModel& m, const std::vector<std::string>& names) {
    nlohmann::json entries = nlohmann::json::array();
    for (int x = 0; x < m.context_count(); ++x) {
        const Family& fam = m.family_at(x);
        if (fam.empty()) continue;
        nlohmann::json members = nlohmann::json::array();
        fam.for_each([&](StateSet y) { members.push_back(set_to_json(y, names)); });
        entries.push_back({{"context", set_to_json(StateSet(m.n(), x), names)},
                           {"family", std::move(members)}});
    }
    return {{"worlds", names}, {"ob", std::move(entries)}};
}

inline ObModel model_from_json(const nlohmann::json& j) {
    const auto names = j.at("worlds").get<std::vector<std::string>>();
    const int n = static_cast<int>(names.size());
    if (n > kMaxWorlds) throw Error("too many worlds");
    ObModel m(n);
    for (const auto& entry : j.at("ob")) {
        const StateSet x = set_from_json(entry.at("context"), names);
        for (const auto& mem : entry.at("family")) m.insert(x, set_from_json(mem, names));
    }
    return m;
}

inline nlohmann::json violation_to_json(const Violation& v, const std::vector<std::string>& names) {
    nlohmann::json j;
    j["axiom"] = to_string(v.axiom);
    j["x"] = set_to_json(v.x, names);
    if (v.y) j["y"] = set_to_json(*v.y, names);
    if (v.z) j["z"] = set_to_json(*v.z, names);
    return j;
}

/// {lemma, n, models_checked, instances_checked, counterexample?}
inline nlohmann::json lemma_report_to_json(const LemmaReport& r,
                                           const std::vector<std::string>& names) {
    nlohmann::json j;
    j["lemma"] = r.lemma;
    j["n"] = r.n;
    j["models_checked"] = r.models_checked;
    j["instances_checked"] = r.instances_checked;
    j["exhaustive"] = r.exhaustive;
    if (r.shortfall) j["shortfall"] = true;
    if (r.counterexample) {
        nlohmann::json c;
        c["model"] = model_to_json(r.counterexample->model, names);
        nlohmann::json worlds = nlohmann::json::array();
        for (WorldId w : r.counterexample->worlds) worlds.push_back(names.at(w));
        c["worlds"] = std::move(worlds);
        nlohmann::json sets = nlohmann::json::array();
        for (StateSet s : r.counterexample->sets) sets.push_back(set_to_json(s, names));
        c["sets"] = std::move(sets);
        j["counterexample"] = std::move(c);
    }
    return j;
}

}  // namespace ctd

#endif  // CTD_JSON_IO_HPP
