#ifndef CTD_MODELS_HPP
#define CTD_MODELS_HPP

#include <optional>
#include <string>

#include "ctd/axioms.hpp"
#include "ctd/core.hpp"

// The named model families, the Ought predicate, and the bad / quasibad /
// subsingleton vocabulary.
//
//   noObligations(X) = {}
//   avoidNone(X)     = { Y | X != {} and X ⊆ Y }
//   avoidOnly_e(X)   = { Y | X∩Y != {} and X\{e} ⊆ X∩Y }
//
//   canon2    A B X  = {}                      if X∩B = {}
//                      { T | X∩B ⊆ T }         else if X∩A = {}
//                      { T | X∩A ⊆ T }         otherwise
//   canon2_II A B X  = {}                      if X∩B = {}
//                      { Y | X∩B = X∩Y }       else if X∩A = {}
//                      { Y | X∩A = X∩Y }       otherwise
//
// Under a canon2_II model, X∩Y consists exactly of the most desirable worlds
// in X. CanonOrder::ATestFirst swaps the branch order so the A-branch wins
// whenever X∩A != {}; the two orders agree whenever A ⊆ B.

namespace ctd {

enum class CanonOrder {
    BTestFirst,  // definition order: the X∩B = {} test comes first
    ATestFirst,  // variant: the X∩A != {} test comes first
};

inline ObModel no_obligations(int n) { return ObModel(n); }

inline ObModel avoid_none(int n) {
    ObModel m(n);
    const unsigned S = 1u << n;
    for (unsigned x = 1; x < S; ++x)
        for (unsigned y = 0; y < S; ++y)
            if ((x & ~y) == 0) m.set(x, y);
    return m;
}

inline ObModel avoid_only(int n, WorldId e) {
    assert(e >= 0 && e < n);
    ObModel m(n);
    const unsigned S = 1u << n;
    const unsigned eb = 1u << e;
    for (unsigned x = 0; x < S; ++x)
        for (unsigned y = 0; y < S; ++y)
            if ((x & y) != 0 && ((x & ~eb) & ~(x & y)) == 0) m.set(x, y);
    return m;
}

namespace detail {

template <typename AB, typename BB>
ObModel canon_common(int n, StateSet A, StateSet B, CanonOrder order, AB&& a_branch,
                     BB&& b_branch) {
    assert(A.n() == n && B.n() == n);
    ObModel m(n);
    const unsigned S = 1u << n;
    const unsigned a = A.encoding(), b = B.encoding();
    for (unsigned x = 0; x < S; ++x) {
        const unsigned xa = x & a, xb = x & b;
        bool take_a;
        if (order == CanonOrder::BTestFirst) {
            if (xb == 0) continue;  // ob(X) = {}
            take_a = xa != 0;
        } else {
            take_a = xa != 0;
            if (!take_a && xb == 0) continue;
        }
        for (unsigned y = 0; y < S; ++y)
            if (take_a ? a_branch(x, y, xa) : b_branch(x, y, xb)) m.set(x, y);
    }
    return m;
}

}  // namespace detail

inline ObModel canon2(int n, StateSet A, StateSet B, CanonOrder order = CanonOrder::BTestFirst) {
    return detail::canon_common(
        n, A, B, order, [](unsigned, unsigned y, unsigned xa) { return (xa & ~y) == 0; },
        [](unsigned, unsigned y, unsigned xb) { return (xb & ~y) == 0; });
}

inline ObModel canon2_II(int n, StateSet A, StateSet B, CanonOrder order = CanonOrder::BTestFirst) {
    return detail::canon_common(
        n, A, B, order, [](unsigned x, unsigned y, unsigned xa) { return (x & y) == xa; },
        [](unsigned x, unsigned y, unsigned xb) { return (x & y) == xb; });
}

/// Ought(A|B): for each X ⊆ B, if A∩X != {} then A in ob(X).
inline bool ought(const ObModel& m, StateSet A, StateSet B) {
    assert(A.n() == m.n() && B.n() == m.n());
    bool ok = true;
    for_each_subset(B, [&](StateSet x) {
        if (ok && A.intersects(x) && !m.contains(x, A)) ok = false;
    });
    return ok;
}

/// a is bad: some context X containing a has an obligation to avoid exactly a.
inline bool is_bad(const ObModel& m, WorldId a) {
    assert(a >= 0 && a < m.n());
    const unsigned S = 1u << m.n();
    const unsigned ab = 1u << a;
    for (unsigned x = 0; x < S; ++x)
        if ((x & ab) != 0 && m.family_at(x).test(x & ~ab)) return true;
    return false;
}

/// a is quasibad: some obligatory proposition excludes a in a context containing it.
inline bool is_quasibad(const ObModel& m, WorldId a) {
    assert(a >= 0 && a < m.n());
    const unsigned S = 1u << m.n();
    const unsigned ab = 1u << a;
    for (unsigned x = 0; x < S; ++x) {
        if ((x & ab) == 0) continue;
        for (unsigned y = 0; y < S; ++y)
            if ((y & ab) == 0 && m.family_at(x).test(y)) return true;
    }
    return false;
}

inline bool is_subsingleton(StateSet s) { return s.size() <= 1; }
inline bool is_cosubsingleton(StateSet s) { return s.complement().size() <= 1; }

struct Classification {
    enum class Kind { NoObligations, AvoidNone, AvoidOnly, NotCJ97 };

    Kind kind = Kind::NotCJ97;
    WorldId world = -1;  // the forbidden world, for AvoidOnly

    static Classification no_obligations() { return {Kind::NoObligations, -1}; }
    static Classification avoid_none() { return {Kind::AvoidNone, -1}; }
    static Classification avoid_only(WorldId a) { return {Kind::AvoidOnly, a}; }
    static Classification not_cj97() { return {Kind::NotCJ97, -1}; }

    friend bool operator==(const Classification& a, const Classification& b) {
        return a.kind == b.kind && a.world == b.world;
    }
    friend bool operator!=(const Classification& a, const Classification& b) { return !(a == b); }
    friend bool operator<(const Classification& a, const Classification& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        return a.world < b.world;
    }

    std::string to_string() const {
        switch (kind) {
            case Kind::NoObligations: return "noObligations";
            case Kind::AvoidNone: return "avoidNone";
            case Kind::AvoidOnly: return "avoidOnly(" + std::to_string(world) + ")";
            case Kind::NotCJ97: return "notCJ97";
        }
        return "?";
    }
};

/// Structural comparison against the three constructor families, in the fixed
/// order noObligations, avoidNone, avoidOnly(0), avoidOnly(1), ...; overlaps
/// (e.g. n=1, where avoidOnly = avoidNone) resolve to the first match.
inline Classification classify(const ObModel& m) {
    const int n = m.n();
    if (m == no_obligations(n)) return Classification::no_obligations();
    if (m == avoid_none(n)) return Classification::avoid_none();
    for (WorldId a = 0; a < n; ++a)
        if (m == avoid_only(n, a)) return Classification::avoid_only(a);
    return Classification::not_cj97();
}

}  // namespace ctd

#endif  // CTD_MODELS_HPP
