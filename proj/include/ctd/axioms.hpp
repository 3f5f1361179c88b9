#ifndef CTD_AXIOMS_HPP
#define CTD_AXIOMS_HPP

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctd/core.hpp"

// Decidable predicates for the conditional-obligation axioms 5(a)-5(g) over
// explicit ObModels, with deterministic violation witnesses.
//
// Axiom bodies (quantifiers range over all subsets of W):
//   5(a)  {} not in ob(X)
//   5(b)  Y∩X = Z∩X and Y in ob(X)         =>  Z in ob(X)
//   5(c)  Y, Z in ob(X)                    =>  Y∩Z in ob(X)        (strong)
//   5(c-) Y, Z in ob(X) and Y∩Z∩X != {}    =>  Y∩Z in ob(X)        (weak)
//   5(d)  Y in ob(X) and X ⊆ Z             =>  (Z\X) ∪ Y in ob(Z)
//   5(e)  Z in ob(X), Y ⊆ X, Y∩Z != {}     =>  Z in ob(Y)
//   5(f)  X in ob(Y) and X in ob(Z)        =>  X in ob(Y∪Z)
//   5(g)  not built in; must be configured before use (CheckOptions::a5g)
//
// Some formulations of 5(d) conclude (Z\X) ∪ (Y∩X) instead; that variant is
// selectable via CheckOptions::five_d.

namespace ctd {

enum class AxiomId {
    A5a,
    A5b,
    A5cWeak,
    A5cStrong,
    A5d,
    A5e,
    A5f,
    A5g,
    // Conditional explosion: for all A,B,C, if A in ob(C) and B∩Ac∩C != {}
    // then B in ob(Ac∩C). A derived property checked by check_cx, not a
    // selectable axiom.
    Cx,
};

inline const char* to_string(AxiomId a) {
    switch (a) {
        case AxiomId::A5a: return "5a";
        case AxiomId::A5b: return "5b";
        case AxiomId::A5cWeak: return "5cw";
        case AxiomId::A5cStrong: return "5cs";
        case AxiomId::A5d: return "5d";
        case AxiomId::A5e: return "5e";
        case AxiomId::A5f: return "5f";
        case AxiomId::A5g: return "5g";
        case AxiomId::Cx: return "cx";
    }
    return "?";
}

/// Accepts the canonical spellings and common aliases:
/// 5a 5b 5cw (alias 5c-) 5cs (alias 5c) 5d 5e 5f 5g.
inline std::optional<AxiomId> axiom_from_string(std::string_view s) {
    if (s == "5a") return AxiomId::A5a;
    if (s == "5b") return AxiomId::A5b;
    if (s == "5cw" || s == "5c-") return AxiomId::A5cWeak;
    if (s == "5cs" || s == "5c") return AxiomId::A5cStrong;
    if (s == "5d") return AxiomId::A5d;
    if (s == "5e") return AxiomId::A5e;
    if (s == "5f") return AxiomId::A5f;
    if (s == "5g") return AxiomId::A5g;
    return std::nullopt;
}

/// A concrete failing instance of an axiom. Field meaning per axiom:
///   5a:  x = context                        (the missing-member is always {})
///   5b:  x = context, y = member, z = the equal-trace set not in ob(x)
///   5c:  x = context, y, z = members whose intersection is not in ob(x)
///   5d:  x = context, y = member, z = the wider context
///   5e:  x = context, y = subcontext, z = member
///   5f:  x = first context, y = second context, z = member
///   cx:  x = context C, y = A, z = B
struct Violation {
    AxiomId axiom;
    StateSet x;
    std::optional<StateSet> y;
    std::optional<StateSet> z;

    friend bool operator==(const Violation& a, const Violation& b) {
        return a.axiom == b.axiom && a.x == b.x && a.y == b.y && a.z == b.z;
    }

    std::string to_string() const {
        std::string s = std::string(ctd::to_string(axiom)) + " at X=" + x.to_string();
        if (y) s += " Y=" + y->to_string();
        if (z) s += " Z=" + z->to_string();
        return s;
    }
};

enum class FiveDVariant {
    Union,         // (Z\X) ∪ Y
    IntersectUnion // (Z\X) ∪ (Y∩X)
};

struct CheckOptions {
    FiveDVariant five_d = FiveDVariant::Union;
    // Formula for 5(g); the source systems leave it abstract, so it must be
    // supplied by the caller before A5g can be checked.
    std::function<std::optional<Violation>(const ObModel&)> a5g;
};

/// A named selection of axioms. At most one of 5cw/5cs may be present.
class AxiomSystem {
public:
    AxiomSystem() = default;

    static AxiomSystem of(std::string name, std::vector<AxiomId> axioms) {
        AxiomSystem s;
        s.name_ = std::move(name);
        std::sort(axioms.begin(), axioms.end());
        axioms.erase(std::unique(axioms.begin(), axioms.end()), axioms.end());
        for (AxiomId a : axioms) {
            if (a == AxiomId::Cx) throw Error("conditional explosion is not a selectable axiom");
        }
        bool weak = std::find(axioms.begin(), axioms.end(), AxiomId::A5cWeak) != axioms.end();
        bool strong = std::find(axioms.begin(), axioms.end(), AxiomId::A5cStrong) != axioms.end();
        if (weak && strong) throw Error("axiom system '" + s.name_ + "' selects both 5c variants");
        s.axioms_ = std::move(axioms);
        return s;
    }

    /// Preset systems: CJ97, CJ02-strong, CJ02-weak, CJ13, CJ22, ANOMALY.
    static AxiomSystem preset(std::string_view name) {
        using A = AxiomId;
        if (name == "CJ97")
            return of("CJ97", {A::A5a, A::A5b, A::A5cStrong, A::A5d, A::A5e});
        if (name == "CJ02-strong")
            return of("CJ02-strong", {A::A5a, A::A5b, A::A5cStrong, A::A5d, A::A5e, A::A5f});
        if (name == "CJ02-weak")
            return of("CJ02-weak", {A::A5a, A::A5b, A::A5cWeak, A::A5d, A::A5e, A::A5f});
        if (name == "CJ13")
            return of("CJ13", {A::A5a, A::A5b, A::A5cWeak, A::A5d, A::A5e});
        if (name == "CJ22")
            return of("CJ22", {A::A5a, A::A5b, A::A5cWeak, A::A5d, A::A5e, A::A5f, A::A5g});
        if (name == "ANOMALY")
            return of("ANOMALY", {A::A5b, A::A5e, A::A5f});
        throw Error("unknown axiom-system preset '" + std::string(name) + "'");
    }

    static const std::vector<std::string>& preset_names() {
        static const std::vector<std::string> names = {"CJ97",  "CJ02-strong", "CJ02-weak",
                                                       "CJ13",  "CJ22",        "ANOMALY"};
        return names;
    }
    static bool is_preset(std::string_view name) {
        const auto& ps = preset_names();
        return std::find(ps.begin(), ps.end(), name) != ps.end();
    }

    const std::string& name() const { return name_; }
    const std::vector<AxiomId>& axioms() const { return axioms_; }
    bool has(AxiomId a) const { return std::find(axioms_.begin(), axioms_.end(), a) != axioms_.end(); }

    friend bool operator==(const AxiomSystem& a, const AxiomSystem& b) {
        return a.name_ == b.name_ && a.axioms_ == b.axioms_;
    }

private:
    std::string name_;
    std::vector<AxiomId> axioms_;  // sorted, unique
};

namespace detail {

// Single-instance evaluators: true = this instance violates the axiom.
// check_* scans instances in ascending (x, y, z) order and reports the first
// hit, so the returned Violation is the lexicographically least one; recheck
// re-evaluates one instance through the same predicates.

inline bool violates_5a(const ObModel& m, unsigned x) { return m.family_at(x).test(0); }

inline bool violates_5b(const ObModel& m, unsigned x, unsigned y, unsigned z) {
    return (y & x) == (z & x) && m.family_at(x).test(y) && !m.family_at(x).test(z);
}

inline bool violates_5c(const ObModel& m, unsigned x, unsigned y, unsigned z, bool weak) {
    if (!m.family_at(x).test(y) || !m.family_at(x).test(z)) return false;
    if (weak && (y & z & x) == 0) return false;
    return !m.family_at(x).test(y & z);
}

inline unsigned five_d_conclusion(unsigned x, unsigned y, unsigned z, FiveDVariant v) {
    return v == FiveDVariant::Union ? ((z & ~x) | y) : ((z & ~x) | (y & x));
}

inline bool violates_5d(const ObModel& m, unsigned x, unsigned y, unsigned z, FiveDVariant v) {
    if ((x & ~z) != 0) return false;  // requires X ⊆ Z
    if (!m.family_at(x).test(y)) return false;
    return !m.family_at(z).test(five_d_conclusion(x, y, z, v));
}

inline bool violates_5e(const ObModel& m, unsigned x, unsigned y, unsigned z) {
    if ((y & ~x) != 0) return false;  // requires Y ⊆ X
    if ((y & z) == 0) return false;
    return m.family_at(x).test(z) && !m.family_at(y).test(z);
}

inline bool violates_5f(const ObModel& m, unsigned x1, unsigned x2, unsigned member) {
    return m.family_at(x1).test(member) && m.family_at(x2).test(member) &&
           !m.family_at(x1 | x2).test(member);
}

inline bool violates_cx(const ObModel& m, unsigned c, unsigned a, unsigned b) {
    const unsigned w = (1u << m.n()) - 1;
    if (!m.family_at(c).test(a)) return false;
    if ((b & ~a & c) == 0) return false;
    return !m.family_at(~a & c & w).test(b);
}

}  // namespace detail

std::optional<Violation> check_cx(const ObModel& m);

/// Checks one axiom over the whole model. Returns no value iff the axiom
/// holds; otherwise the lexicographically least violating instance.
/// Checking A5g without a configured formula throws Error.
inline std::optional<Violation> check_axiom(const ObModel& m, AxiomId a,
                                            const CheckOptions& opts = {}) {
    const unsigned S = 1u << m.n();
    const int n = m.n();
    auto set = [n](unsigned e) { return StateSet(n, e); };
    switch (a) {
        case AxiomId::A5a:
            for (unsigned x = 0; x < S; ++x)
                if (detail::violates_5a(m, x)) return Violation{a, set(x), {}, {}};
            return std::nullopt;
        case AxiomId::A5b:
            for (unsigned x = 0; x < S; ++x)
                for (unsigned y = 0; y < S; ++y) {
                    if (!m.family_at(x).test(y)) continue;
                    for (unsigned z = 0; z < S; ++z)
                        if (detail::violates_5b(m, x, y, z))
                            return Violation{a, set(x), set(y), set(z)};
                }
            return std::nullopt;
        case AxiomId::A5cWeak:
        case AxiomId::A5cStrong: {
            const bool weak = a == AxiomId::A5cWeak;
            for (unsigned x = 0; x < S; ++x)
                for (unsigned y = 0; y < S; ++y) {
                    if (!m.family_at(x).test(y)) continue;
                    for (unsigned z = 0; z < S; ++z)
                        if (detail::violates_5c(m, x, y, z, weak))
                            return Violation{a, set(x), set(y), set(z)};
                }
            return std::nullopt;
        }
        case AxiomId::A5d:
            for (unsigned x = 0; x < S; ++x)
                for (unsigned y = 0; y < S; ++y) {
                    if (!m.family_at(x).test(y)) continue;
                    for (unsigned z = 0; z < S; ++z)
                        if (detail::violates_5d(m, x, y, z, opts.five_d))
                            return Violation{a, set(x), set(y), set(z)};
                }
            return std::nullopt;
        case AxiomId::A5e:
            for (unsigned x = 0; x < S; ++x)
                for (unsigned y = 0; y < S; ++y) {
                    if ((y & ~x) != 0) continue;
                    for (unsigned z = 0; z < S; ++z)
                        if (detail::violates_5e(m, x, y, z))
                            return Violation{a, set(x), set(y), set(z)};
                }
            return std::nullopt;
        case AxiomId::A5f:
            for (unsigned x1 = 0; x1 < S; ++x1)
                for (unsigned x2 = 0; x2 < S; ++x2)
                    for (unsigned y = 0; y < S; ++y)
                        if (detail::violates_5f(m, x1, x2, y))
                            return Violation{a, set(x1), set(x2), set(y)};
            return std::nullopt;
        case AxiomId::A5g:
            if (!opts.a5g) throw Error("axiom formula unavailable: 5g has not been configured");
            return opts.a5g(m);
        case AxiomId::Cx:
            return check_cx(m);
    }
    return std::nullopt;
}

/// Conditional explosion: for all A,B,C, if A in ob(C) and B∩Ac∩C != {} then
/// B in ob(Ac∩C). Witness fields: x = C, y = A, z = B.
inline std::optional<Violation> check_cx(const ObModel& m) {
    const unsigned S = 1u << m.n();
    for (unsigned a = 0; a < S; ++a)
        for (unsigned b = 0; b < S; ++b)
            for (unsigned c = 0; c < S; ++c)
                if (detail::violates_cx(m, c, a, b))
                    return Violation{AxiomId::Cx, StateSet(m.n(), c), StateSet(m.n(), a),
                                     StateSet(m.n(), b)};
    return std::nullopt;
}

/// Re-evaluates a single reported instance; true iff it still violates.
inline bool recheck(const ObModel& m, const Violation& v, const CheckOptions& opts = {}) {
    const unsigned x = v.x.encoding();
    const unsigned y = v.y ? v.y->encoding() : 0;
    const unsigned z = v.z ? v.z->encoding() : 0;
    switch (v.axiom) {
        case AxiomId::A5a: return detail::violates_5a(m, x);
        case AxiomId::A5b: return detail::violates_5b(m, x, y, z);
        case AxiomId::A5cWeak: return detail::violates_5c(m, x, y, z, true);
        case AxiomId::A5cStrong: return detail::violates_5c(m, x, y, z, false);
        case AxiomId::A5d: return detail::violates_5d(m, x, y, z, opts.five_d);
        case AxiomId::A5e: return detail::violates_5e(m, x, y, z);
        case AxiomId::A5f: return detail::violates_5f(m, x, y, z);
        case AxiomId::A5g: return opts.a5g && opts.a5g(m).has_value();
        case AxiomId::Cx: return detail::violates_cx(m, x, y, z);
    }
    return false;
}

struct SatisfactionReport {
    std::vector<std::pair<AxiomId, std::optional<Violation>>> entries;

    bool pass() const {
        for (const auto& [a, v] : entries)
            if (v) return false;
        return true;
    }
    const std::optional<Violation>& of(AxiomId a) const {
        static const std::optional<Violation> none;
        for (const auto& [id, v] : entries)
            if (id == a) return v;
        return none;
    }
};

/// Per-axiom check of a whole system; pass iff every axiom passes.
inline SatisfactionReport satisfies(const ObModel& m, const AxiomSystem& s,
                                    const CheckOptions& opts = {}) {
    SatisfactionReport r;
    r.entries.reserve(s.axioms().size());
    for (AxiomId a : s.axioms()) r.entries.emplace_back(a, check_axiom(m, a, opts));
    return r;
}

/// satisfies() without the per-axiom report; short-circuits.
inline bool satisfies_all(const ObModel& m, const AxiomSystem& s, const CheckOptions& opts = {}) {
    for (AxiomId a : s.axioms())
        if (check_axiom(m, a, opts)) return false;
    return true;
}

}  // namespace ctd

#endif  // CTD_AXIOMS_HPP
