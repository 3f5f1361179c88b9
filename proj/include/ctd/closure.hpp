#ifndef CTD_CLOSURE_HPP
#define CTD_CLOSURE_HPP

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ctd/axioms.hpp"
#include "ctd/core.hpp"

// Least-model computation by worklist saturation under the generating
// readings of axioms 5(b), 5(d), 5(e), 5(f), and checkable derivation traces.
//
// Rule readings (all monotone; 5(a) and 5(c) are constraints, not
// generators, and are excluded from closure):
//   Rb: from Y in ob(X),               add every Z with Z∩X = Y∩X to ob(X)
//   Rd: from Y in ob(X) and X ⊆ Z,     add (Z\X) ∪ Y to ob(Z)
//   Re: from Z in ob(X), Y ⊆ X, Y∩Z != {},  add Z to ob(Y)
//   Rf: from Y in ob(X1) and Y in ob(X2),   add Y to ob(X1 ∪ X2)

namespace ctd {

/// Y in ob(X): context first, member second.
struct Statement {
    StateSet context;
    StateSet member;

    friend bool operator==(const Statement& a, const Statement& b) {
        return a.context == b.context && a.member == b.member;
    }
    friend bool operator!=(const Statement& a, const Statement& b) { return !(a == b); }

    std::string to_string() const { return member.to_string() + " in ob(" + context.to_string() + ")"; }
};

/// A single asserted membership Y in ob(X).
struct MembershipPremise {
    StateSet context;
    StateSet member;
    friend bool operator==(const MembershipPremise&, const MembershipPremise&) = default;
};

/// Ought(A|B); expands to { A in ob(X) : X ⊆ B, A∩X != {} }.
struct OughtPremise {
    StateSet what;   // A
    StateSet given;  // B
    friend bool operator==(const OughtPremise&, const OughtPremise&) = default;
};

using Premise = std::variant<MembershipPremise, OughtPremise>;

/// The memberships a premise asserts, in ascending context order.
inline std::vector<Statement> expand_premise(const Premise& p) {
    std::vector<Statement> out;
    if (const auto* m = std::get_if<MembershipPremise>(&p)) {
        out.push_back({m->context, m->member});
    } else {
        const auto& o = std::get<OughtPremise>(p);
        for_each_subset(o.given, [&](StateSet x) {
            if (o.what.intersects(x)) out.push_back({x, o.what});
        });
    }
    return out;
}

/// True iff stmt is one of the memberships p asserts.
inline bool premise_covers(const Premise& p, const Statement& stmt) {
    if (const auto* m = std::get_if<MembershipPremise>(&p))
        return stmt.context == m->context && stmt.member == m->member;
    const auto& o = std::get<OughtPremise>(p);
    return stmt.member == o.what && stmt.context.subset_of(o.given) &&
           o.what.intersects(stmt.context);
}

enum class RuleId { Rb, Rd, Re, Rf };

inline const char* to_string(RuleId r) {
    switch (r) {
        case RuleId::Rb: return "Rb";
        case RuleId::Rd: return "Rd";
        case RuleId::Re: return "Re";
        case RuleId::Rf: return "Rf";
    }
    return "?";
}

inline std::optional<RuleId> rule_from_string(std::string_view s) {
    if (s == "Rb") return RuleId::Rb;
    if (s == "Rd") return RuleId::Rd;
    if (s == "Re") return RuleId::Re;
    if (s == "Rf") return RuleId::Rf;
    return std::nullopt;
}

class RuleSet {
public:
    RuleSet() = default;
    RuleSet(std::initializer_list<RuleId> rs) {
        for (RuleId r : rs) insert(r);
    }

    /// The generating rules of a system: Rb/Rd/Re/Rf for 5(b)/(d)/(e)/(f).
    static RuleSet from_system(const AxiomSystem& s) {
        RuleSet r;
        if (s.has(AxiomId::A5b)) r.insert(RuleId::Rb);
        if (s.has(AxiomId::A5d)) r.insert(RuleId::Rd);
        if (s.has(AxiomId::A5e)) r.insert(RuleId::Re);
        if (s.has(AxiomId::A5f)) r.insert(RuleId::Rf);
        return r;
    }

    void insert(RuleId r) { bits_ |= 1u << static_cast<int>(r); }
    bool has(RuleId r) const { return (bits_ >> static_cast<int>(r) & 1u) != 0; }
    bool empty() const { return bits_ == 0; }

    std::vector<RuleId> to_vector() const {
        std::vector<RuleId> out;
        for (RuleId r : {RuleId::Rb, RuleId::Rd, RuleId::Re, RuleId::Rf})
            if (has(r)) out.push_back(r);
        return out;
    }

    friend bool operator==(const RuleSet& a, const RuleSet& b) { return a.bits_ == b.bits_; }

private:
    std::uint8_t bits_ = 0;
};

struct ClosureOptions {
    FiveDVariant five_d = FiveDVariant::Union;
    // Worklist discipline. The resulting table is order-independent (the
    // rules are monotone); only Fifo guarantees the documented trace shape.
    enum class Order { Fifo, Lifo, Shuffled } order = Order::Fifo;
    std::uint64_t seed = 0;  // for Order::Shuffled
};

/// One step of a derivation: a statement plus its justification, which is
/// either a premise reference or a rule application whose antecedents are
/// earlier step indices. `instantiation` carries the rule's chosen set where
/// one exists (Rb: the new member; Rd: the wider context; Re: the
/// subcontext); it is redundant with the statement and is re-checked.
struct DerivationStep {
    Statement statement;
    std::optional<int> premise;  // index into Derivation::premises
    std::optional<RuleId> rule;
    std::vector<int> antecedents;  // step indices, each < this step's index
    std::optional<StateSet> instantiation;
};

struct Derivation {
    int n = 0;
    std::vector<Premise> premises;
    std::vector<DerivationStep> steps;

    const Statement& goal() const { return steps.back().statement; }
};

namespace detail {

struct Justification {
    enum class Kind : std::uint8_t { None, Premise, Rule } kind = Kind::None;
    std::int16_t premise = -1;
    RuleId rule = RuleId::Rb;
    std::uint32_t ant1 = 0, ant2 = 0;
    std::uint16_t inst = 0;
    bool has_inst = false;
    bool two_ants = false;
    std::uint32_t seq = 0;  // discovery order
};

struct Saturation {
    int n = 0;
    ObModel model;
    std::vector<Justification> just;  // indexed by fact key, when recording

    static std::uint32_t key(int n, unsigned ctx, unsigned member) { return (ctx << n) | member; }
};

inline Saturation saturate(int n, const std::vector<Premise>& premises, RuleSet rules,
                           const ClosureOptions& opts, bool record) {
    const unsigned S = 1u << n;
    const unsigned W = S - 1;
    Saturation sat;
    sat.n = n;
    sat.model = ObModel(n);
    if (record) sat.just.resize(std::size_t{S} * S);

    std::vector<Family> ctxs_of(S, Family(n));  // member -> set of contexts
    std::vector<std::uint32_t> queue;
    std::size_t head = 0;
    std::uint32_t seq = 0;
    std::mt19937_64 rng(opts.seed);

    auto add = [&](unsigned ctx, unsigned member, Justification j) {
        if (sat.model.family_at(ctx).test(member)) return;
        sat.model.set(ctx, member);
        ctxs_of[member].set(ctx);
        const std::uint32_t k = Saturation::key(n, ctx, member);
        if (record) {
            j.seq = seq++;
            sat.just[k] = j;
        }
        queue.push_back(k);
    };

    for (std::size_t i = 0; i < premises.size(); ++i) {
        Justification j;
        j.kind = Justification::Kind::Premise;
        j.premise = static_cast<std::int16_t>(i);
        for (const Statement& s : expand_premise(premises[i]))
            add(s.context.encoding(), s.member.encoding(), j);
    }

    while (head < queue.size()) {
        std::uint32_t k;
        switch (opts.order) {
            case ClosureOptions::Order::Fifo: k = queue[head++]; break;
            case ClosureOptions::Order::Lifo:
                k = queue.back();
                queue.pop_back();
                break;
            case ClosureOptions::Order::Shuffled: {
                std::uniform_int_distribution<std::size_t> pick(head, queue.size() - 1);
                std::swap(queue[pick(rng)], queue.back());
                k = queue.back();
                queue.pop_back();
                break;
            }
        }
        const unsigned ctx = k >> n, member = k & W;

        if (rules.has(RuleId::Rb)) {
            const unsigned trace = member & ctx;
            const unsigned comp = W & ~ctx;
            unsigned s = 0;
            while (true) {  // submasks of comp, ascending
                Justification j;
                j.kind = Justification::Kind::Rule;
                j.rule = RuleId::Rb;
                j.ant1 = k;
                j.inst = static_cast<std::uint16_t>(trace | s);
                j.has_inst = true;
                add(ctx, trace | s, j);
                if (s == comp) break;
                s = (s - comp) & comp;
            }
        }
        if (rules.has(RuleId::Rd)) {
            const unsigned comp = W & ~ctx;
            unsigned s = 0;
            while (true) {
                const unsigned z = ctx | s;
                const unsigned concl =
                    opts.five_d == FiveDVariant::Union ? ((z & ~ctx) | member)
                                                       : ((z & ~ctx) | (member & ctx));
                Justification j;
                j.kind = Justification::Kind::Rule;
                j.rule = RuleId::Rd;
                j.ant1 = k;
                j.inst = static_cast<std::uint16_t>(z);
                j.has_inst = true;
                add(z, concl, j);
                if (s == comp) break;
                s = (s - comp) & comp;
            }
        }
        if (rules.has(RuleId::Re)) {
            unsigned s = 0;
            while (true) {  // submasks of ctx, ascending
                if ((s & member) != 0) {
                    Justification j;
                    j.kind = Justification::Kind::Rule;
                    j.rule = RuleId::Re;
                    j.ant1 = k;
                    j.inst = static_cast<std::uint16_t>(s);
                    j.has_inst = true;
                    add(s, member, j);
                }
                if (s == ctx) break;
                s = (s - ctx) & ctx;
            }
        }
        if (rules.has(RuleId::Rf)) {
            // Join with every context currently holding this member; pairs
            // involving later facts are handled when those facts are popped.
            std::vector<StateSet> others = ctxs_of[member].members();
            for (StateSet x2 : others) {
                Justification j;
                j.kind = Justification::Kind::Rule;
                j.rule = RuleId::Rf;
                j.ant1 = k;
                j.ant2 = Saturation::key(n, x2.encoding(), member);
                j.two_ants = true;
                add(ctx | x2.encoding(), member, j);
            }
        }
    }
    return sat;
}

}  // namespace detail

/// The pointwise-least model containing every expanded premise and closed
/// under the selected rules. Terminates: the membership lattice is finite and
/// every rule is monotone. An empty rule set closes under nothing (premises
/// only, which still makes Ought premises explicit memberships).
inline ObModel least_model(int n, const std::vector<Premise>& premises, RuleSet rules,
                           const ClosureOptions& opts = {}) {
    return detail::saturate(n, premises, rules, opts, false).model;
}

/// True iff m contains all expanded premises and is closed under every
/// selected rule (equivalently, satisfies the rules' axioms).
inline bool is_closed(const ObModel& m, const std::vector<Premise>& premises, RuleSet rules,
                      const ClosureOptions& opts = {}) {
    for (const Premise& p : premises)
        for (const Statement& s : expand_premise(p))
            if (!m.contains(s.context, s.member)) return false;
    CheckOptions co;
    co.five_d = opts.five_d;
    if (rules.has(RuleId::Rb) && check_axiom(m, AxiomId::A5b)) return false;
    if (rules.has(RuleId::Rd) && check_axiom(m, AxiomId::A5d, co)) return false;
    if (rules.has(RuleId::Re) && check_axiom(m, AxiomId::A5e)) return false;
    if (rules.has(RuleId::Rf) && check_axiom(m, AxiomId::A5f)) return false;
    return true;
}

/// Breadth-first saturation with parent pointers; returns a shortest-first
/// derivation of goal if goal is in the least model, otherwise nothing.
/// Ties are broken by ascending (context, member) encoding.
inline std::optional<Derivation> derive(int n, const std::vector<Premise>& premises, RuleSet rules,
                                        const Statement& goal, const ClosureOptions& opts = {}) {
    ClosureOptions o = opts;
    o.order = ClosureOptions::Order::Fifo;  // trace shape is defined for BFS only
    detail::Saturation sat = detail::saturate(n, premises, rules, o, true);
    const unsigned gk = detail::Saturation::key(n, goal.context.encoding(), goal.member.encoding());
    if (!sat.model.contains(goal.context, goal.member)) return std::nullopt;

    // Collect the goal's ancestry, then order by discovery sequence, which
    // topologically sorts it (antecedents are always discovered earlier).
    std::vector<std::uint32_t> needed;
    std::vector<bool> seen(sat.just.size(), false);
    std::vector<std::uint32_t> stack{gk};
    seen[gk] = true;
    while (!stack.empty()) {
        const std::uint32_t k = stack.back();
        stack.pop_back();
        needed.push_back(k);
        const auto& j = sat.just[k];
        if (j.kind == detail::Justification::Kind::Rule) {
            if (!seen[j.ant1]) {
                seen[j.ant1] = true;
                stack.push_back(j.ant1);
            }
            if (j.two_ants && !seen[j.ant2]) {
                seen[j.ant2] = true;
                stack.push_back(j.ant2);
            }
        }
    }
    std::sort(needed.begin(), needed.end(), [&](std::uint32_t a, std::uint32_t b) {
        return sat.just[a].seq < sat.just[b].seq;
    });

    Derivation d;
    d.n = n;
    d.premises = premises;
    std::vector<int> step_of(sat.just.size(), -1);
    const unsigned W = (1u << n) - 1;
    for (const std::uint32_t k : needed) {
        const auto& j = sat.just[k];
        DerivationStep step;
        step.statement = {StateSet(n, k >> n), StateSet(n, k & W)};
        if (j.kind == detail::Justification::Kind::Premise) {
            step.premise = j.premise;
        } else {
            step.rule = j.rule;
            step.antecedents.push_back(step_of[j.ant1]);
            if (j.two_ants) step.antecedents.push_back(step_of[j.ant2]);
            if (j.has_inst) step.instantiation = StateSet(n, j.inst);
        }
        step_of[k] = static_cast<int>(d.steps.size());
        d.steps.push_back(std::move(step));
    }
    return d;
}

/// Validates every step's justification independently of how the derivation
/// was produced. On failure, writes a message naming the failing step to
/// *why (when given).
inline bool check_derivation(const Derivation& d, std::string* why = nullptr,
                             const ClosureOptions& opts = {}) {
    auto fail = [&](std::size_t step, const std::string& msg) {
        if (why) *why = "step " + std::to_string(step) + ": " + msg;
        return false;
    };
    if (d.steps.empty()) return fail(0, "derivation has no steps");
    for (std::size_t i = 0; i < d.steps.size(); ++i) {
        const DerivationStep& s = d.steps[i];
        if (s.statement.context.n() != d.n || s.statement.member.n() != d.n)
            return fail(i, "statement is not over the declared world set");
        if (s.premise && s.rule) return fail(i, "both premise and rule justification");
        if (s.premise) {
            if (*s.premise < 0 || *s.premise >= static_cast<int>(d.premises.size()))
                return fail(i, "premise index out of range");
            if (!premise_covers(d.premises[*s.premise], s.statement))
                return fail(i, "statement is not asserted by the referenced premise");
            continue;
        }
        if (!s.rule) return fail(i, "no justification");
        for (int a : s.antecedents)
            if (a < 0 || a >= static_cast<int>(i)) return fail(i, "antecedent index out of range");
        const auto ant = [&](int idx) -> const Statement& {
            return d.steps[s.antecedents[idx]].statement;
        };
        switch (*s.rule) {
            case RuleId::Rb: {
                if (s.antecedents.size() != 1) return fail(i, "Rb takes one antecedent");
                const Statement& a = ant(0);
                if (s.statement.context != a.context)
                    return fail(i, "Rb conclusion changes the context");
                if ((s.statement.member & a.context) != (a.member & a.context))
                    return fail(i, "Rb conclusion has a different trace on the context");
                if (s.instantiation && *s.instantiation != s.statement.member)
                    return fail(i, "instantiation does not match the conclusion");
                break;
            }
            case RuleId::Rd: {
                if (s.antecedents.size() != 1) return fail(i, "Rd takes one antecedent");
                const Statement& a = ant(0);
                if (!a.context.subset_of(s.statement.context))
                    return fail(i, "Rd requires the antecedent context to be included");
                const unsigned concl = detail::five_d_conclusion(
                    a.context.encoding(), a.member.encoding(), s.statement.context.encoding(),
                    opts.five_d);
                if (s.statement.member.encoding() != concl)
                    return fail(i, "Rd conclusion does not match the rule");
                if (s.instantiation && *s.instantiation != s.statement.context)
                    return fail(i, "instantiation does not match the conclusion");
                break;
            }
            case RuleId::Re: {
                if (s.antecedents.size() != 1) return fail(i, "Re takes one antecedent");
                const Statement& a = ant(0);
                if (s.statement.member != a.member) return fail(i, "Re preserves the member");
                if (!s.statement.context.subset_of(a.context))
                    return fail(i, "Re requires a subcontext");
                if (!s.statement.context.intersects(a.member))
                    return fail(i, "Re requires the member to stay possible");
                if (s.instantiation && *s.instantiation != s.statement.context)
                    return fail(i, "instantiation does not match the conclusion");
                break;
            }
            case RuleId::Rf: {
                if (s.antecedents.size() != 2) return fail(i, "Rf takes two antecedents");
                const Statement& a = ant(0);
                const Statement& b = ant(1);
                if (a.member != b.member || s.statement.member != a.member)
                    return fail(i, "Rf requires a common member");
                if (s.statement.context != (a.context | b.context))
                    return fail(i, "Rf conclusion context is not the union");
                if (s.instantiation) return fail(i, "Rf takes no instantiation");
                break;
            }
        }
    }
    return true;
}

/// The built-in grades derivation over worlds 0..4 (grades A B C D F):
/// from "given A or B it ought to be A" and "given C or D it ought to be C"
/// to "given B, C or D it ought to be C".
inline Derivation grades_anomaly() {
    const int n = 5;
    auto set = [&](unsigned bits) { return StateSet(n, bits); };
    const StateSet gA = set(0b00001), gC = set(0b00100);
    const StateSet AB = set(0b00011), CD = set(0b01100);
    const StateSet AC = set(0b00101), ABCD = set(0b01111), BCD = set(0b01110);

    Derivation d;
    d.n = n;
    d.premises = {MembershipPremise{AB, gA}, MembershipPremise{CD, gC}};

    auto premise_step = [&](Statement st, int idx) {
        DerivationStep s;
        s.statement = st;
        s.premise = idx;
        return s;
    };
    auto rule_step = [&](Statement st, RuleId r, std::vector<int> ants,
                         std::optional<StateSet> inst) {
        DerivationStep s;
        s.statement = st;
        s.rule = r;
        s.antecedents = std::move(ants);
        s.instantiation = inst;
        return s;
    };

    d.steps.push_back(premise_step({AB, gA}, 0));                          // 0
    d.steps.push_back(premise_step({CD, gC}, 1));                          // 1
    d.steps.push_back(rule_step({CD, AC}, RuleId::Rb, {1}, AC));           // 2
    d.steps.push_back(rule_step({AB, AC}, RuleId::Rb, {0}, AC));           // 3
    d.steps.push_back(rule_step({ABCD, AC}, RuleId::Rf, {3, 2}, {}));      // 4
    d.steps.push_back(rule_step({BCD, AC}, RuleId::Re, {4}, BCD));         // 5
    d.steps.push_back(rule_step({BCD, gC}, RuleId::Rb, {5}, gC));          // 6
    return d;
}

/// The premises of the grades scenario, for closure queries.
inline std::vector<Premise> grades_premises() {
    const int n = 5;
    return {MembershipPremise{StateSet(n, 0b00011), StateSet(n, 0b00001)},
            MembershipPremise{StateSet(n, 0b01100), StateSet(n, 0b00100)}};
}

}  // namespace ctd

#endif  // CTD_CLOSURE_HPP
