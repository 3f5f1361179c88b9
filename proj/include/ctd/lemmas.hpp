#ifndef CTD_LEMMAS_HPP
#define CTD_LEMMAS_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ctd/axioms.hpp"
#include "ctd/core.hpp"
#include "ctd/models.hpp"
#include "ctd/search.hpp"

// The registry of structural lemmas about models of the 5(a)-5(f) axiom
// family, each encoded as: a hypothesis axiom set (filters models) plus a
// statement checked on every instantiation of its free variables. World
// variables range over all worlds, set variables over all subsets; embedded
// "whenever A ⊆ X" quantifiers are evaluated per model, as stated.
//
// verify_lemma checks the statement on every (model, instantiation) pair for
// every hypothesis-satisfying model: exhaustively at n <= 2, and at n == 3 by
// compressed generation (requires 5(b) among the hypotheses) until the model
// space is exhausted or the instance target is met.

namespace ctd {

struct LemmaSpec {
    std::string id;
    AxiomSystem hypotheses;
    int world_vars = 0;
    int set_vars = 0;
    // true = the instance satisfies the lemma statement
    std::function<bool(const ObModel&, const std::vector<WorldId>&, const std::vector<StateSet>&)>
        statement;
};

namespace detail {

/// "A is obligatory in all larger contexts": for all X ⊇ A, A in ob(X).
inline bool global_ought(const ObModel& m, StateSet A) {
    const unsigned S = 1u << m.n();
    const unsigned a = A.encoding();
    for (unsigned x = a; x < S; ++x)
        if ((a & ~x) == 0 && !m.family_at(x).test(a)) return false;
    return true;
}

inline bool no_quasibad_world(const ObModel& m) {
    for (WorldId a = 0; a < m.n(); ++a)
        if (is_quasibad(m, a)) return false;
    return true;
}

}  // namespace detail

/// All 22 registered lemmas, in dependency order.
inline const std::vector<LemmaSpec>& lemma_registry() {
    static const std::vector<LemmaSpec> registry = [] {
        using A = AxiomId;
        std::vector<LemmaSpec> reg;
        auto add = [&](std::string id, std::vector<AxiomId> hyp, int wv, int sv, auto fn) {
            reg.push_back({id, AxiomSystem::of(id, std::move(hyp)), wv, sv, fn});
        };
        auto pair_set = [](WorldId a, WorldId b, int n) {
            return StateSet::singleton(n, a) | StateSet::singleton(n, b);
        };

        // If a1 != a2, a1,a2 not in A, {a1,a2} in ob({a1,a2}), and A is
        // obligatory in every superset context, then both singletons are
        // obligatory in the pair context.
        add("single_ob_pair", {A::A5d, A::A5e, A::A5cWeak}, 2, 1,
            [pair_set](const ObModel& m, const std::vector<WorldId>& w,
                       const std::vector<StateSet>& s) {
                const WorldId a1 = w[0], a2 = w[1];
                const StateSet& A = s[0];
                if (a1 == a2 || A.contains(a1) || A.contains(a2)) return true;
                const StateSet pair = pair_set(a1, a2, m.n());
                if (!m.contains(pair, pair) || !detail::global_ought(m, A)) return true;
                return m.contains(pair, StateSet::singleton(m.n(), a1)) &&
                       m.contains(pair, StateSet::singleton(m.n(), a2));
            });
        add("semiglobal_holds", {A::A5a, A::A5cStrong, A::A5d, A::A5e}, 2, 1,
            [pair_set](const ObModel& m, const std::vector<WorldId>& w,
                       const std::vector<StateSet>& s) {
                const WorldId a1 = w[0], a2 = w[1];
                const StateSet& A = s[0];
                if (a1 == a2 || A.contains(a1) || A.contains(a2)) return true;
                const StateSet pair = pair_set(a1, a2, m.n());
                if (!m.contains(pair, pair)) return true;
                return !detail::global_ought(m, A);
            });
        add("global_holds_specific", {A::A5a, A::A5b, A::A5cStrong, A::A5d, A::A5e}, 2, 1,
            [](const ObModel& m, const std::vector<WorldId>& w, const std::vector<StateSet>& s) {
                const WorldId a1 = w[0], a2 = w[1];
                const StateSet& A = s[0];
                if (a1 == a2 || A.contains(a1) || A.contains(a2)) return true;
                return !detail::global_ought(m, A);
            });
        // A in ob(C) and B∩Ac∩C != {} imply B in ob(Ac∩C).
        add("conditional_explosion", {A::A5a, A::A5b, A::A5d, A::A5e}, 0, 3,
            [](const ObModel& m, const std::vector<WorldId>&, const std::vector<StateSet>& s) {
                const StateSet &a = s[0], &b = s[1], &c = s[2];
                if (!m.contains(c, a)) return true;
                const StateSet rest = (b & a.complement()) & c;
                if (rest.empty()) return true;
                return m.contains(a.complement() & c, b);
            });
        // Badness of the world does not depend on context.
        add("obSelfSdiff_of_bad", {A::A5b, A::A5d, A::A5e}, 1, 1,
            [](const ObModel& m, const std::vector<WorldId>& w, const std::vector<StateSet>& s) {
                if (!is_bad(m, w[0])) return true;
                const StateSet rest = s[0].without(w[0]);
                if (rest.empty()) return true;
                return m.contains(s[0], rest);
            });
        add("obSelf_of_obSelf", {A::A5b, A::A5d, A::A5e}, 0, 2,
            [](const ObModel& m, const std::vector<WorldId>&, const std::vector<StateSet>& s) {
                if (!m.contains(s[0], s[0]) || s[1].empty()) return true;
                return m.contains(s[1], s[1]);
            });
        add("obSelf_of_obSelfSdiff", {A::A5b, A::A5d, A::A5e}, 1, 1,
            [](const ObModel& m, const std::vector<WorldId>& w, const std::vector<StateSet>& s) {
                const StateSet rest = s[0].without(w[0]);
                if (rest.empty() || !m.contains(s[0], rest)) return true;
                return m.contains(s[0], s[0]);
            });
        add("obSelf_univ", {A::A5a, A::A5d, A::A5e}, 1, 0,
            [](const ObModel& m, const std::vector<WorldId>& w, const std::vector<StateSet>&) {
                const StateSet W = StateSet::universe(m.n());
                if (!m.contains(W, W.without(w[0]))) return true;
                return m.contains(W, W);
            });
        add("obSelf_of_bad.single", {A::A5a, A::A5b, A::A5d, A::A5e}, 1, 0,
            [](const ObModel& m, const std::vector<WorldId>& w, const std::vector<StateSet>&) {
                if (!is_bad(m, w[0])) return true;
                const StateSet sing = StateSet::singleton(m.n(), w[0]);
                return m.contains(sing, sing);
            });
        // Global-to-local: if globally-obligatory contexts are always
        // cosubsingletons, then B in ob(C) with B ⊆ C forces C\B small.
        add("local_of_global", {A::A5a, A::A5d, A::A5e}, 0, 2,
            [](const ObModel& m, const std::vector<WorldId>&, const std::vector<StateSet>& s) {
                bool antecedent = true;
                for_each_set(m.n(), [&](StateSet A) {
                    if (antecedent && detail::global_ought(m, A) && !is_cosubsingleton(A))
                        antecedent = false;
                });
                if (!antecedent) return true;
                const StateSet &b = s[0], &c = s[1];
                if (!b.subset_of(c) || !m.contains(c, b)) return true;
                return is_subsingleton(c - b);
            });
        add("global_holds", {A::A5a, A::A5b, A::A5cStrong, A::A5d, A::A5e}, 0, 1,
            [](const ObModel& m, const std::vector<WorldId>&, const std::vector<StateSet>& s) {
                if (!detail::global_ought(m, s[0])) return true;
                return is_cosubsingleton(s[0]);
            });
        add("local_holds", {A::A5a, A::A5b, A::A5cStrong, A::A5d, A::A5e}, 0, 2,
            [](const ObModel& m, const std::vector<WorldId>&, const std::vector<StateSet>& s) {
                const StateSet &b = s[0], &c = s[1];
                if (!b.subset_of(c) || !m.contains(c, b)) return true;
                return is_subsingleton(c - b);
            });
        add("avoidNone_of_no_quasibad", {A::A5a, A::A5b, A::A5cStrong, A::A5d, A::A5e}, 0, 0,
            [](const ObModel& m, const std::vector<WorldId>&, const std::vector<StateSet>&) {
                if (m == no_obligations(m.n()) || !detail::no_quasibad_world(m)) return true;
                return m == avoid_none(m.n());
            });
        add("unique_bad", {A::A5a, A::A5b, A::A5cStrong, A::A5d, A::A5e}, 2, 0,
            [](const ObModel& m, const std::vector<WorldId>& w, const std::vector<StateSet>&) {
                if (!is_bad(m, w[0]) || !is_bad(m, w[1])) return true;
                return w[0] == w[1];
            });
        // Stated for 5(a)(b)(d)(e) in some sources, but its proof goes through
        // unique_bad, which needs 5(c); without 5(c) the two-obligation model
        // ob({0,1}) = {{0},{1},{0,1}} (plus its 5(d) closure) refutes it, so
        // the hypotheses here are the full CJ97 set.
        add("bad_cosubsingleton_of_ob", {A::A5a, A::A5b, A::A5cStrong, A::A5d, A::A5e}, 1, 2,
            [](const ObModel& m, const std::vector<WorldId>& w, const std::vector<StateSet>& s) {
                if (!is_bad(m, w[0])) return true;
                const StateSet meet = s[0] & s[1];
                if (!m.contains(s[0], meet)) return true;
                return meet == s[0] || meet == s[0].without(w[0]);
            });
        add("obSelf_of_bad.nonsingle", {A::A5b, A::A5d, A::A5e}, 1, 1,
            [](const ObModel& m, const std::vector<WorldId>& w, const std::vector<StateSet>& s) {
                if (!is_bad(m, w[0])) return true;
                if (s[0].empty() || s[0] == StateSet::singleton(m.n(), w[0])) return true;
                return m.contains(s[0], s[0]);
            });
        add("obSelf_of_bad", {A::A5a, A::A5b, A::A5d, A::A5e}, 1, 1,
            [](const ObModel& m, const std::vector<WorldId>& w, const std::vector<StateSet>& s) {
                if (!is_bad(m, w[0]) || s[0].empty()) return true;
                return m.contains(s[0], s[0]);
            });
        add("sub_avoidOnly_of_bad", {A::A5a, A::A5b, A::A5cStrong, A::A5d, A::A5e}, 1, 1,
            [](const ObModel& m, const std::vector<WorldId>& w, const std::vector<StateSet>& s) {
                if (!is_bad(m, w[0])) return true;
                return m[s[0]].subset_of(avoid_only(m.n(), w[0])[s[0]]);
            });
        // Unlike sub_avoidOnly_of_bad, this direction needs no form of 5(c).
        add("avoidOnly_sub_of_bad", {A::A5a, A::A5b, A::A5d, A::A5e}, 1, 1,
            [](const ObModel& m, const std::vector<WorldId>& w, const std::vector<StateSet>& s) {
                if (!is_bad(m, w[0])) return true;
                return avoid_only(m.n(), w[0])[s[0]].subset_of(m[s[0]]);
            });
        add("avoidOnly_of_bad", {A::A5a, A::A5b, A::A5cStrong, A::A5d, A::A5e}, 1, 0,
            [](const ObModel& m, const std::vector<WorldId>& w, const std::vector<StateSet>&) {
                if (!is_bad(m, w[0])) return true;
                return m == avoid_only(m.n(), w[0]);
            });
        add("bad_of_quasibad", {A::A5a, A::A5b, A::A5e}, 1, 0,
            [](const ObModel& m, const std::vector<WorldId>& w, const std::vector<StateSet>&) {
                if (!is_quasibad(m, w[0])) return true;
                return is_bad(m, w[0]);
            });
        // The classification: every CJ97 model is one of the three families
        // (with the avoidOnly world bad in its model).
        add("models_ofCJ_1997", {A::A5a, A::A5b, A::A5cStrong, A::A5d, A::A5e}, 0, 0,
            [](const ObModel& m, const std::vector<WorldId>&, const std::vector<StateSet>&) {
                const Classification c = classify(m);
                if (c.kind == Classification::Kind::NotCJ97) return false;
                if (c.kind == Classification::Kind::AvoidOnly) return is_bad(m, c.world);
                return true;
            });
        return reg;
    }();
    return registry;
}

inline const LemmaSpec* find_lemma(std::string_view id) {
    for (const LemmaSpec& l : lemma_registry())
        if (l.id == id) return &l;
    return nullptr;
}

struct LemmaCounterexample {
    ObModel model;
    std::vector<WorldId> worlds;
    std::vector<StateSet> sets;
};

struct LemmaReport {
    std::string lemma;
    int n = 0;
    std::uint64_t models_checked = 0;
    std::uint64_t instances_checked = 0;
    bool exhaustive = false;  // every hypothesis-satisfying model was covered
    bool shortfall = false;   // budget ran out before the instance target
    std::optional<LemmaCounterexample> counterexample;

    bool verified() const { return !counterexample.has_value(); }
};

/// Checks the lemma on every (model, instantiation) pair. n <= 2 enumerates
/// hypothesis models exhaustively; n == 3 uses compressed generation (the
/// hypotheses must contain 5(b)) and stops once `target_instances` instances
/// have been checked or the space is exhausted, whichever comes first.
inline LemmaReport verify_lemma(const LemmaSpec& spec, int n, const SearchBudget& budget = {},
                                std::uint64_t target_instances = 10000,
                                const CheckOptions& opts = {}) {
    if (n > 3) throw Error("lemma verification supports n <= 3");
    if (n == 3 && !spec.hypotheses.has(AxiomId::A5b))
        throw Error("lemma '" + spec.id +
                    "': n = 3 model generation requires 5b among the hypotheses");
    LemmaReport report;
    report.lemma = spec.id;
    report.n = n;

    auto check_model = [&](const ObModel& m) {
        ++report.models_checked;
        std::vector<WorldId> w(spec.world_vars, 0);
        std::vector<StateSet> s(spec.set_vars, StateSet::empty_set(n));
        const unsigned S = 1u << n;
        // odometer over all (world, set) tuples, ascending
        std::function<bool(int)> loop_sets = [&](int i) -> bool {
            if (i == spec.set_vars) {
                ++report.instances_checked;
                if (!spec.statement(m, w, s)) {
                    report.counterexample = LemmaCounterexample{m, w, s};
                    return false;
                }
                return true;
            }
            for (unsigned e = 0; e < S; ++e) {
                s[i] = StateSet(n, e);
                if (!loop_sets(i + 1)) return false;
            }
            return true;
        };
        std::function<bool(int)> loop_worlds = [&](int i) -> bool {
            if (i == spec.world_vars) return loop_sets(0);
            for (WorldId v = 0; v < n; ++v) {
                w[i] = v;
                if (!loop_worlds(i + 1)) return false;
            }
            return true;
        };
        if (n == 0 && spec.world_vars > 0) return true;  // no worlds to bind
        return loop_worlds(0);
    };

    const bool sampled = n == 3;
    EnumerationResult stats = enumerate_models(
        n, spec.hypotheses,
        [&](const ObModel& m) {
            if (!check_model(m)) return false;  // counterexample: stop
            return !(sampled && report.instances_checked >= target_instances);
        },
        budget, opts);
    report.exhaustive = stats.complete;
    report.shortfall = !stats.complete && stats.budget_exhausted &&
                       report.instances_checked < target_instances &&
                       !report.counterexample.has_value();
    return report;
}

inline LemmaReport verify_lemma(std::string_view id, int n, const SearchBudget& budget = {},
                                std::uint64_t target_instances = 10000,
                                const CheckOptions& opts = {}) {
    const LemmaSpec* spec = find_lemma(id);
    if (!spec) throw Error("unknown lemma '" + std::string(id) + "'");
    return verify_lemma(*spec, n, budget, target_instances, opts);
}

}  // namespace ctd

#endif  // CTD_LEMMAS_HPP
