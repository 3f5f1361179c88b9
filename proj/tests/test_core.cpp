#include <catch_amalgamated.hpp>

#include <random>

#include "ctd/core.hpp"

using namespace ctd;

TEST_CASE("set algebra basics") {
    const int n = 3;
    const StateSet a(n, 0b011);  // {0,1}
    const StateSet b(n, 0b110);  // {1,2}

    CHECK((a & b) == StateSet(n, 0b010));
    CHECK((a | b) == StateSet::universe(n));
    CHECK((a - a) == StateSet::empty_set(n));
    CHECK(StateSet::empty_set(n).complement() == StateSet(n, 0b111));
    CHECK(a.complement() == StateSet(n, 0b100));
    CHECK(StateSet(n, 0b010).subset_of(a));
    CHECK_FALSE(a.subset_of(b));
    CHECK(a.intersects(b));
    CHECK_FALSE(StateSet(n, 0b001).intersects(StateSet(n, 0b100)));
    CHECK(a.size() == 2);
    CHECK(StateSet::empty_set(n).empty());
    CHECK(StateSet::singleton(n, 2) == StateSet(n, 0b100));
    CHECK(a.to_string() == "{0,1}");
}

TEST_CASE("subset enumeration") {
    SECTION("empty base") {
        const auto subs = subsets_of(StateSet::empty_set(2));
        REQUIRE(subs.size() == 1);
        CHECK(subs[0].empty());
    }
    SECTION("base {0,2}") {
        const auto subs = subsets_of(StateSet(3, 0b101));
        REQUIRE(subs.size() == 4);
        CHECK(subs[0].encoding() == 0b000);
        CHECK(subs[1].encoding() == 0b001);
        CHECK(subs[2].encoding() == 0b100);
        CHECK(subs[3].encoding() == 0b101);
    }
    SECTION("full base has 2^n subsets, each exactly once, ascending") {
        const auto subs = subsets_of(StateSet::universe(3));
        REQUIRE(subs.size() == 8);
        for (std::size_t i = 0; i < subs.size(); ++i) CHECK(subs[i].encoding() == i);
    }
}

TEST_CASE("encoding is a bijection") {
    for (int n = 0; n <= 4; ++n)
        for (unsigned e = 0; e < (1u << n); ++e) {
            const StateSet s(n, e);
            CHECK(s.encoding() == e);
            StateSet rebuilt = StateSet::empty_set(n);
            for (int w = 0; w < n; ++w)
                if (s.contains(w)) rebuilt = rebuilt.with(w);
            CHECK(rebuilt == s);
        }
}

TEST_CASE("family membership agrees with member enumeration") {
    std::mt19937 rng(7);
    const int n = 3;
    for (int round = 0; round < 50; ++round) {
        Family fam(n);
        for (unsigned e = 0; e < (1u << n); ++e)
            if (rng() & 1) fam.set(e);
        const auto members = fam.members();
        int count = 0;
        for (unsigned e = 0; e < (1u << n); ++e) {
            const bool listed =
                std::find(members.begin(), members.end(), StateSet(n, e)) != members.end();
            CHECK(listed == fam.contains(StateSet(n, e)));
            if (listed) ++count;
        }
        CHECK(count == fam.size());
    }
}

TEST_CASE("model get/add round-trip") {
    const int n = 3;
    const ObModel m(n);
    for (unsigned x = 0; x < 8u; ++x) CHECK(m.family_at(x).empty());

    const StateSet ctx(n, 0b011), member(n, 0b001);
    const ObModel m2 = m.add(ctx, member);
    CHECK(m2.contains(ctx, member));
    CHECK_FALSE(m.contains(ctx, member));  // add is pure
    CHECK(m2[ctx].size() == 1);
    CHECK(m2 != m);
    CHECK(m2 == m.add(ctx, member));
}

TEST_CASE("pointwise inclusion is a partial order") {
    const int n = 2;
    std::mt19937 rng(11);
    auto random_model = [&] {
        ObModel m(n);
        for (unsigned x = 0; x < 4u; ++x)
            for (unsigned y = 0; y < 4u; ++y)
                if (rng() % 3 == 0) m.set(x, y);
        return m;
    };
    for (int round = 0; round < 100; ++round) {
        const ObModel a = random_model(), b = random_model(), c = random_model();
        CHECK(pointwise_leq(a, a));  // reflexive
        if (pointwise_leq(a, b) && pointwise_leq(b, a)) CHECK(a == b);  // antisymmetric
        if (pointwise_leq(a, b) && pointwise_leq(b, c)) CHECK(pointwise_leq(a, c));  // transitive
    }
}
