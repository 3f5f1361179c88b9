// Acceptance suite: one criterion per run_criterion call, one pass/fail line
// each, nonzero exit if any fails. Criteria marked with runtime bounds are
// timed and fail when over budget.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ctd/ctd.hpp"

using namespace ctd;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

int failures = 0;

void run_criterion(int index, const std::string& name, double time_budget_s,
                   const std::function<void(Outcome&)>& body) {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (time_budget_s > 0 && secs > time_budget_s) {
        std::ostringstream os;
        os << "runtime " << secs << "s exceeds budget " << time_budget_s << "s";
        out.require(false, os.str());
    }
    std::printf("[%s] criterion %d: %s (%.2fs)%s%s\n", out.pass ? "PASS" : "FAIL", index,
                name.c_str(), secs, out.detail.empty() ? "" : " -- ", out.detail.c_str());
    if (!out.pass) ++failures;
}

std::vector<ObModel> cj97_family(int n) {
    std::vector<ObModel> fam = {no_obligations(n), avoid_none(n)};
    for (WorldId a = 0; a < n; ++a) fam.push_back(avoid_only(n, a));
    return fam;
}

bool same_model_set(const std::vector<ObModel>& got, std::vector<ObModel> expected) {
    if (got.size() != expected.size()) return false;
    for (const ObModel& m : got) {
        const auto it = std::find(expected.begin(), expected.end(), m);
        if (it == expected.end()) return false;
        expected.erase(it);
    }
    return expected.empty();
}

// Plain filter over every candidate table at n <= 2, written independently of
// the enumeration engine: decode integer t into a table and test the system.
std::vector<ObModel> raw_filter(int n, const AxiomSystem& system) {
    const unsigned S = 1u << n;
    std::uint64_t total = 1;
    for (unsigned i = 0; i < S; ++i) total *= (std::uint64_t{1} << S);
    std::vector<ObModel> out;
    for (std::uint64_t t = 0; t < total; ++t) {
        ObModel m(n);
        for (unsigned x = 0; x < S; ++x) {
            const std::uint64_t fam = (t >> (x * S)) & ((1u << S) - 1);
            for (unsigned y = 0; y < S; ++y)
                if (fam >> y & 1u) m.set(x, y);
        }
        bool ok = true;
        for (AxiomId a : system.axioms())
            if (check_axiom(m, a)) {
                ok = false;
                break;
            }
        if (ok) out.push_back(m);
    }
    return out;
}

std::vector<Premise> ctd_pair(int n, unsigned a, unsigned b) {
    const StateSet A(n, a), B(n, b);
    return {OughtPremise{A, StateSet::universe(n)}, OughtPremise{B, StateSet::universe(n) - A}};
}

}  // namespace

int main() {
    const AxiomSystem cj97 = AxiomSystem::preset("CJ97");

    run_criterion(1, "classification by exhaustive and pruned enumeration", 0, [&](Outcome& out) {
        // n=1: two models, against a raw filter over all 16 tables
        const auto m1 = enumerate_models(1, cj97);
        out.require(m1.size() == 2, "n=1 expected 2 models");
        out.require(same_model_set(m1, {no_obligations(1), avoid_none(1)}), "n=1 identities");
        out.require(same_model_set(m1, raw_filter(1, cj97)), "n=1 raw filter");

        // n=2: four models under 1 s, against a raw filter over all 65536 tables
        const auto t2 = std::chrono::steady_clock::now();
        const auto m2 = enumerate_models(2, cj97);
        const double s2 = std::chrono::duration<double>(std::chrono::steady_clock::now() - t2).count();
        out.require(m2.size() == 4, "n=2 expected 4 models");
        out.require(same_model_set(m2, cj97_family(2)), "n=2 identities");
        out.require(same_model_set(m2, raw_filter(2, cj97)), "n=2 raw filter");
        out.require(s2 < 1.0, "n=2 enumeration over 1s");

        // n=3: five models by pruned search, under 2 min
        const auto t3 = std::chrono::steady_clock::now();
        const auto m3 = enumerate_models(3, cj97);
        const double s3 = std::chrono::duration<double>(std::chrono::steady_clock::now() - t3).count();
        out.require(m3.size() == 5, "n=3 expected 5 models");
        out.require(same_model_set(m3, cj97_family(3)), "n=3 identities");
        out.require(s3 < 120.0, "n=3 search over 2min");
        std::ostringstream os;
        os << "n=2 in " << s2 << "s, n=3 in " << s3 << "s";
        out.note(os.str());
    });

    run_criterion(2, "constructor families satisfy CJ97 up to n=4", 0, [&](Outcome& out) {
        int violations = 0;
        for (int n = 0; n <= 4; ++n)
            for (const ObModel& m : cj97_family(n))
                if (!satisfies(m, cj97).pass()) ++violations;
        out.require(violations == 0, "violations found");
    });

    run_criterion(3, "grades anomaly derivation and closure fact", 1.0, [&](Outcome& out) {
        const Derivation d = grades_anomaly();
        std::string why;
        out.require(check_derivation(d, &why), "fixture rejected: " + why);
        const Statement goal{StateSet(5, 0b01110), StateSet(5, 0b00100)};
        out.require(d.goal() == goal, "fixture goal mismatch");
        const ObModel lm =
            least_model(5, grades_premises(), {RuleId::Rb, RuleId::Re, RuleId::Rf});
        out.require(lm.contains(goal.context, goal.member),
                    "closure lacks {C} in ob({B,C,D})");
    });

    run_criterion(4, "least models match the canonical constructors", 60.0, [&](Outcome& out) {
        int checked = 0;
        struct PairCount {
            int total = 0, eq_verbatim = 0, eq_afirst = 0;
        };
        PairCount nonsub_II, nonsub_I;
        for (int n = 1; n <= 4; ++n) {
            const unsigned S = 1u << n;
            for (unsigned a = 1; a < S; ++a)
                for (unsigned b = 0; b < S; ++b) {
                    const StateSet A(n, a), B(n, b);
                    const auto premises = ctd_pair(n, a, b);
                    const ObModel least_II = least_model(n, premises, {RuleId::Rb});
                    const ObModel least_I =
                        least_model(n, premises, {RuleId::Rb, RuleId::Rd, RuleId::Rf});
                    if ((a & ~b) == 0) {  // nonempty A within B: asserted
                        ++checked;
                        if (least_II != canon2_II(n, A, B)) {
                            out.require(false, "canon2_II mismatch at n=" + std::to_string(n) +
                                                   " A=" + A.to_string() + " B=" + B.to_string());
                            return;
                        }
                        if (least_I != canon2(n, A, B)) {
                            out.require(false, "canon2 mismatch at n=" + std::to_string(n) +
                                                   " A=" + A.to_string() + " B=" + B.to_string());
                            return;
                        }
                    } else {  // recorded, not asserted
                        ++nonsub_II.total;
                        ++nonsub_I.total;
                        if (least_II == canon2_II(n, A, B)) ++nonsub_II.eq_verbatim;
                        if (least_II == canon2_II(n, A, B, CanonOrder::ATestFirst))
                            ++nonsub_II.eq_afirst;
                        if (least_I == canon2(n, A, B)) ++nonsub_I.eq_verbatim;
                        if (least_I == canon2(n, A, B, CanonOrder::ATestFirst))
                            ++nonsub_I.eq_afirst;
                    }
                }
        }
        std::ostringstream os;
        os << checked << " A-within-B pairs asserted; A-not-within-B report: canon2_II "
           << nonsub_II.eq_verbatim << "/" << nonsub_II.total << " equal verbatim, "
           << nonsub_II.eq_afirst << "/" << nonsub_II.total << " equal A-first; canon2 "
           << nonsub_I.eq_verbatim << "/" << nonsub_I.total << " equal verbatim, "
           << nonsub_I.eq_afirst << "/" << nonsub_I.total << " equal A-first";
        out.note(os.str());
    });

    run_criterion(5, "canon2_II robustness: 5a, strong 5c, 5e up to n=4", 0, [&](Outcome& out) {
        const AxiomSystem robust =
            AxiomSystem::of("robust", {AxiomId::A5a, AxiomId::A5cStrong, AxiomId::A5e});
        for (int n = 1; n <= 4; ++n) {
            const unsigned S = 1u << n;
            for (unsigned b = 0; b < S; ++b)
                for (unsigned a = b;; a = (a - 1) & b) {
                    if (a != 0) {
                        const ObModel m = canon2_II(n, StateSet(n, a), StateSet(n, b));
                        if (!satisfies(m, robust).pass()) {
                            out.require(false, "violation at n=" + std::to_string(n) +
                                                   " A=" + StateSet(n, a).to_string() +
                                                   " B=" + StateSet(n, b).to_string());
                            return;
                        }
                    }
                    if (a == 0) break;
                }
        }
        out.note("5g portion deferred: no formula configured");
    });

    run_criterion(6, "conditional explosion holds for 5a,5b,5d,5e at n=2", 0, [&](Outcome& out) {
        const AxiomSystem sys = AxiomSystem::of(
            "cx-hyp", {AxiomId::A5a, AxiomId::A5b, AxiomId::A5d, AxiomId::A5e});
        int models = 0, counterexamples = 0;
        enumerate_models(2, sys, [&](const ObModel& m) {
            ++models;
            if (check_cx(m)) ++counterexamples;
            return true;
        });
        out.require(counterexamples == 0, "counterexamples found");
        out.note(std::to_string(models) + " models checked");
    });

    run_criterion(7, "lemma registry verifies at n=2 and n=3", 0, [&](Outcome& out) {
        const auto& registry = lemma_registry();
        out.require(registry.size() == 22, "registry must hold 22 lemmas");
        std::uint64_t total_models = 0, total_instances = 0;
        for (const LemmaSpec& spec : registry) {
            const LemmaReport r2 = verify_lemma(spec, 2);
            total_models += r2.models_checked;
            total_instances += r2.instances_checked;
            if (!r2.verified()) {
                const auto names = default_world_names(2);
                out.require(false, spec.id + " refuted at n=2: " +
                                       lemma_report_to_json(r2, names).dump());
                continue;
            }
            if (!r2.exhaustive) out.require(false, spec.id + " not exhaustive at n=2");
            if (spec.hypotheses.has(AxiomId::A5b)) {
                const LemmaReport r3 = verify_lemma(spec, 3);
                total_models += r3.models_checked;
                total_instances += r3.instances_checked;
                if (!r3.verified()) {
                    const auto names = default_world_names(3);
                    out.require(false, spec.id + " refuted at n=3: " +
                                           lemma_report_to_json(r3, names).dump());
                    continue;
                }
                out.require(r3.exhaustive || r3.instances_checked >= 10000,
                            spec.id + " sampled fewer than 10^4 instances at n=3");
                out.require(!r3.shortfall, spec.id + " sampling shortfall at n=3");
            }
        }
        out.note(std::to_string(total_models) + " models / " + std::to_string(total_instances) +
                 " instances");
    });

    run_criterion(8, "5f follows from 5a,5b,5c,5d at n=2 (both 5c variants)", 0,
                  [&](Outcome& out) {
        for (AxiomId variant : {AxiomId::A5cStrong, AxiomId::A5cWeak}) {
            const AxiomSystem sys =
                AxiomSystem::of("deriv", {AxiomId::A5a, AxiomId::A5b, variant, AxiomId::A5d});
            int models = 0, violating = 0;
            enumerate_models(2, sys, [&](const ObModel& m) {
                ++models;
                if (check_axiom(m, AxiomId::A5f)) ++violating;
                return true;
            });
            out.require(violating == 0,
                        std::string(to_string(variant)) + ": 5f violated");
            out.note(std::string(to_string(variant)) + ": " + std::to_string(models) +
                     " models, 0 violate 5f");
            const int expected_models = variant == AxiomId::A5cStrong ? 15 : 20;
            out.require(models == expected_models,
                        std::string(to_string(variant)) + " model count drifted");
        }
    });

    run_criterion(9, "independence of the five CJ97 axioms", 0, [&](Outcome& out) {
        struct Pinned {
            AxiomId fail;
            int n;
            std::vector<std::pair<unsigned, unsigned>> table;
        };
        const std::vector<Pinned> pinned = {
            {AxiomId::A5a, 1, {{1, 0}}},
            {AxiomId::A5b, 1, {{0, 1}, {1, 1}}},
            {AxiomId::A5cStrong, 2, {{1, 1}, {1, 3}, {2, 2}, {2, 3}, {3, 1}, {3, 2}, {3, 3}}},
            {AxiomId::A5d, 2, {{1, 1}, {1, 3}}},
            {AxiomId::A5e, 2, {{3, 1}}},
        };
        for (const Pinned& p : pinned) {
            std::vector<AxiomId> hold = cj97.axioms();
            std::erase(hold, p.fail);
            const auto r = find_independence_witness(hold, p.fail, 4);
            if (r.status == IndependenceResult::Status::Inconclusive) {
                out.note(std::string(to_string(p.fail)) + ": inconclusive at n<=4");
                continue;
            }
            if (r.status != IndependenceResult::Status::Found) {
                out.require(false, std::string(to_string(p.fail)) + ": no witness found");
                continue;
            }
            ObModel expected(p.n);
            for (auto [x, y] : p.table) expected.set(x, y);
            out.require(r.n == p.n, std::string(to_string(p.fail)) + ": witness size moved");
            out.require(*r.model == expected,
                        std::string(to_string(p.fail)) + ": minimized witness drifted");
            out.require(satisfies_all(*r.model, AxiomSystem::of("hold", hold)),
                        std::string(to_string(p.fail)) + ": witness breaks the hold set");
            out.require(check_axiom(*r.model, p.fail).has_value(),
                        std::string(to_string(p.fail)) + ": witness fails to violate");
        }
    });

    run_criterion(10, "determinism and round-trips", 0, [&](Outcome& out) {
        // identical reports across reruns and worker counts
        auto parsed = dsl::parse("worlds a b\nsystem CJ97\nenumerate");
        const auto& script = std::get<dsl::Script>(parsed);
        dsl::RunFlags one, four;
        four.workers = 4;
        const std::string r1 = dsl::report_to_json(dsl::run(script, one)).dump();
        const std::string r2 = dsl::report_to_json(dsl::run(script, one)).dump();
        const std::string r4 = dsl::report_to_json(dsl::run(script, four)).dump();
        out.require(r1 == r2, "rerun changed the report");
        out.require(r1 == r4, "worker count changed the report");

        // seeded lemma sampling is reproducible
        SearchBudget seeded;
        seeded.seed = 7;
        const auto l1 = verify_lemma("obSelf_of_obSelf", 3, seeded);
        const auto l2 = verify_lemma("obSelf_of_obSelf", 3, seeded);
        out.require(l1.models_checked == l2.models_checked &&
                        l1.instances_checked == l2.instances_checked,
                    "seeded lemma run not reproducible");

        // .ctd print/parse identity on a canonical script
        const std::string canonical = dsl::print(script);
        auto reparsed = dsl::parse(canonical);
        out.require(std::holds_alternative<dsl::Script>(reparsed), "canonical print reparses");
        out.require(std::get<dsl::Script>(reparsed) == script, "print/parse identity");
        out.require(dsl::print(std::get<dsl::Script>(reparsed)) == canonical,
                    "printer idempotence");

        // obliteral save/load is bit-exact on random models
        std::mt19937 rng(2718);
        for (int round = 0; round < 30; ++round) {
            const int n = 1 + static_cast<int>(rng() % 3);
            ObModel m(n);
            for (unsigned x = 0; x < (1u << n); ++x)
                for (unsigned y = 0; y < (1u << n); ++y)
                    if (rng() % 4 == 0) m.set(x, y);
            dsl::Script s;
            for (int i = 0; i < n; ++i) s.worlds.push_back(std::string(1, char('a' + i)));
            s.stmts.push_back(dsl::WorldsStmt{s.worlds});
            dsl::ObLiteral lit;
            for (unsigned x = 0; x < (1u << n); ++x)
                if (!m.family_at(x).empty())
                    lit.entries.emplace_back(StateSet(n, x), m.family_at(x).members());
            s.stmts.push_back(dsl::ModelStmt{"m", lit});
            auto loaded = dsl::parse(dsl::print(s));
            if (!std::holds_alternative<dsl::Script>(loaded)) {
                out.require(false, "obliteral reparse failed");
                break;
            }
            const auto& lst = std::get<dsl::Script>(loaded).stmts;
            const auto* decl = std::get_if<dsl::ModelStmt>(&lst[1]);
            const auto* lit2 = decl ? std::get_if<dsl::ObLiteral>(&decl->expr) : nullptr;
            ObModel rebuilt(n);
            if (lit2)
                for (const auto& [context, members] : lit2->entries)
                    for (StateSet y : members) rebuilt.insert(context, y);
            if (rebuilt != m) {
                out.require(false, "obliteral round-trip not bit-exact");
                break;
            }
        }

        // derivation JSON round-trip
        const Derivation d = grades_anomaly();
        const auto names = std::vector<std::string>{"A", "B", "C", "D", "F"};
        const auto j = derivation_to_json(d, names);
        out.require(derivation_to_json(derivation_from_json(j), names) == j,
                    "derivation JSON round-trip");
    });

    std::printf("%s: %d/%d criteria passed\n", failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
                10 - failures, 10);
    return failures == 0 ? 0 : 1;
}
