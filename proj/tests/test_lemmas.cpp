#include <catch_amalgamated.hpp>

#include <set>

#include "ctd/lemmas.hpp"

using namespace ctd;

TEST_CASE("registry shape") {
    const auto& reg = lemma_registry();
    CHECK(reg.size() == 22);
    std::set<std::string> ids;
    for (const auto& spec : reg) ids.insert(spec.id);
    CHECK(ids.size() == reg.size());
    CHECK(find_lemma("unique_bad") != nullptr);
    CHECK(find_lemma("obSelf_of_bad.single") != nullptr);
    CHECK(find_lemma("models_ofCJ_1997") != nullptr);
    CHECK(find_lemma("nonsense") == nullptr);
    CHECK_THROWS_AS(verify_lemma("nonsense", 2), Error);
}

TEST_CASE("exhaustive verification at n=2 with pinned model counts") {
    // Hypothesis-family sizes at n=2, frozen from a direct scan of all 65536
    // candidate tables.
    struct Expect {
        const char* id;
        std::uint64_t models;
    };
    const Expect expectations[] = {
        {"single_ob_pair", 886},           // {5cw,5d,5e}
        {"semiglobal_holds", 45},          // {5a,5cs,5d,5e}
        {"global_holds_specific", 4},      // CJ97
        {"conditional_explosion", 5},      // {5a,5b,5d,5e}
        {"obSelfSdiff_of_bad", 38},        // {5b,5d,5e}
        {"obSelf_of_obSelf", 38},
        {"obSelf_univ", 99},               // {5a,5d,5e}
        {"local_of_global", 99},
        {"unique_bad", 4},
        {"bad_of_quasibad", 13},           // {5a,5b,5e}
        {"avoidOnly_sub_of_bad", 5},       // {5a,5b,5d,5e}
        {"models_ofCJ_1997", 4},
    };
    for (const auto& e : expectations) {
        const LemmaReport r = verify_lemma(e.id, 2);
        INFO(e.id);
        CHECK(r.verified());
        CHECK(r.exhaustive);
        CHECK(r.models_checked == e.models);
    }
}

TEST_CASE("instance counting covers the full instantiation space") {
    const LemmaReport r = verify_lemma("obSelf_of_obSelf", 2);
    // 38 models, two set variables over 4 subsets each
    CHECK(r.instances_checked == 38 * 16);
    const LemmaReport u = verify_lemma("unique_bad", 2);
    CHECK(u.instances_checked == 4 * 4);  // two world variables
}

TEST_CASE("bad_cosubsingleton_of_ob needs intersection closure") {
    // Under {5a,5b,5d,5e} alone the statement is refuted by the
    // two-conflicting-obligations model; its proof route goes through
    // unique_bad, which needs 5(c). The registry therefore carries the full
    // CJ97 hypothesis set; this pins the refuting model.
    ObModel m(2);
    for (auto [x, y] : std::initializer_list<std::pair<unsigned, unsigned>>{
             {0b01, 0b01}, {0b01, 0b11}, {0b10, 0b10}, {0b10, 0b11},
             {0b11, 0b01}, {0b11, 0b10}, {0b11, 0b11}})
        m.set(x, y);
    CHECK(satisfies_all(
        m, AxiomSystem::of("weak", {AxiomId::A5a, AxiomId::A5b, AxiomId::A5d, AxiomId::A5e})));
    CHECK(is_bad(m, 0));
    CHECK(is_bad(m, 1));
    // the statement fails at a=0, X={0,1}, Y={0}: X∩Y={0} is obligatory but
    // is neither X nor X\{a}={1}
    const LemmaSpec* spec = find_lemma("bad_cosubsingleton_of_ob");
    REQUIRE(spec);
    CHECK(spec->hypotheses.has(AxiomId::A5cStrong));
    CHECK_FALSE(spec->statement(m, {0}, {StateSet(2, 0b11), StateSet(2, 0b01)}));
    // with the registry hypotheses it verifies
    CHECK(verify_lemma(*spec, 2).verified());
}

TEST_CASE("a falsifiable statement produces a counterexample with its witness") {
    // Doctored spec: claim every {5b}-model has empty ob({}); refuted.
    LemmaSpec fake;
    fake.id = "fake";
    fake.hypotheses = AxiomSystem::of("5b-only", {AxiomId::A5b});
    fake.world_vars = 0;
    fake.set_vars = 0;
    fake.statement = [](const ObModel& m, const auto&, const auto&) {
        return m.family_at(0).empty();
    };
    const LemmaReport r = verify_lemma(fake, 1);
    REQUIRE(r.counterexample);
    CHECK_FALSE(r.verified());
    CHECK_FALSE(r.counterexample->model.family_at(0).empty());
}

TEST_CASE("n=3 sampled verification under 5b-compressed generation") {
    SECTION("small families exhaust below the target") {
        const LemmaReport r = verify_lemma("conditional_explosion", 3);
        CHECK(r.verified());
        CHECK(r.exhaustive);
        CHECK(r.models_checked == 19);  // {5a,5b,5d,5e} at n=3
        CHECK(r.instances_checked == 19 * 512);
    }
    SECTION("large families stop at the instance target") {
        const LemmaReport r = verify_lemma("obSelf_of_obSelf", 3);
        CHECK(r.verified());
        CHECK((r.exhaustive || r.instances_checked >= 10000));
        CHECK_FALSE(r.shortfall);
    }
    SECTION("CJ97 lemmas see exactly the five models") {
        const LemmaReport r = verify_lemma("unique_bad", 3);
        CHECK(r.verified());
        CHECK(r.exhaustive);
        CHECK(r.models_checked == 5);
    }
    SECTION("seeded runs are reproducible") {
        SearchBudget b;
        b.seed = 42;
        const LemmaReport r1 = verify_lemma("obSelf_of_bad", 3, b);
        const LemmaReport r2 = verify_lemma("obSelf_of_bad", 3, b);
        CHECK(r1.models_checked == r2.models_checked);
        CHECK(r1.instances_checked == r2.instances_checked);
        CHECK(r1.verified() == r2.verified());
    }
}

TEST_CASE("rejected configurations") {
    // single_ob_pair has no 5b hypothesis: no compressed generation at n=3
    CHECK_THROWS_AS(verify_lemma("single_ob_pair", 3), Error);
    CHECK_THROWS_AS(verify_lemma("unique_bad", 4), Error);
}

TEST_CASE("sampling shortfall is reported when the budget cuts generation off") {
    SearchBudget tiny;
    tiny.max_expansions = 40;
    const LemmaReport r = verify_lemma("obSelf_of_obSelf", 3, tiny);
    CHECK_FALSE(r.exhaustive);
    if (r.instances_checked < 10000) CHECK(r.shortfall);
}
