#ifndef CTD_SEARCH_HPP
#define CTD_SEARCH_HPP

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <future>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ctd/axioms.hpp"
#include "ctd/core.hpp"
#include "ctd/models.hpp"

// Exhaustive and pruned enumeration of ObModels satisfying an axiom system.
//
// n <= 2: raw scan over all (2^(2^n))^(2^n) tables (16 at n=1, 65536 at n=2).
// n == 3: requires 5(b). Under 5(b), ob(X) is a union of equal-trace classes
// keyed by subsets of X, so a model is determined by the trace sets
// tr(X) ⊆ P(X); the space is prod_X 2^(2^|X|) = 2^27 assignments at n=3.
// Contexts are assigned in ascending encoding order (so all subsets of a
// context come first) and branches are pruned with incremental checks:
// 5(a)/5(c) locally per context, 5(d)/5(e)/5(f) against assigned subsets.
//
// Trace forms of the constraints, for T ranging over tr(X):
//   5a: {} not in tr(X)
//   5c: T1, T2 in tr(X) -> T1∩T2 in tr(X)      (weak: only when T1∩T2 != {})
//   5d: T in tr(X), X ⊆ Z -> (Z\X) ∪ T in tr(Z)   (both 5d variants coincide
//       under 5(b): the conclusions have equal traces on Z)
//   5e: T in tr(X), Y ⊆ X, Y∩T != {} -> Y∩T in tr(Y)
//   5f: T1 in tr(X1), T2 in tr(X2), T1∩X2 = T2∩X1 -> T1∪T2 in tr(X1∪X2)

namespace ctd {

struct SearchBudget {
    std::uint64_t max_expansions = 200'000'000;
    std::optional<double> wall_clock_seconds;
    std::uint64_t seed = 0;  // != 0 randomizes DFS branch order (sampled modes)

    void validate() const {
        if (max_expansions == 0) throw Error("search budget must allow at least one expansion");
        if (wall_clock_seconds && *wall_clock_seconds <= 0)
            throw Error("wall-clock budget must be positive");
    }
};

struct EnumerationResult {
    std::uint64_t nodes = 0;
    bool complete = true;  // the whole space was covered
    bool budget_exhausted = false;
};

namespace detail {

/// ob(X) = { Y | Y∩X in tr(X) } for the given per-context trace masks
/// (bit e of traces[X] set <=> the set with encoding e is a trace of X).
inline ObModel model_from_traces(int n, const std::vector<std::uint32_t>& traces) {
    const unsigned S = 1u << n;
    ObModel m(n);
    for (unsigned x = 0; x < S; ++x)
        for (unsigned y = 0; y < S; ++y)
            if (traces[x] >> (y & x) & 1u) m.set(x, y);
    return m;
}

class DeadlineClock {
public:
    explicit DeadlineClock(const SearchBudget& b) {
        if (b.wall_clock_seconds)
            deadline_ = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(*b.wall_clock_seconds));
    }
    bool expired() const {
        return deadline_ && std::chrono::steady_clock::now() > *deadline_;
    }

private:
    std::optional<std::chrono::steady_clock::time_point> deadline_;
};

/// Raw scan of every candidate table at n <= 2, ascending table encoding
/// (family of context 0 in the least-significant digit).
inline EnumerationResult raw_scan(int n, const AxiomSystem& system,
                                  const std::function<bool(const ObModel&)>& sink,
                                  const SearchBudget& budget, const CheckOptions& opts,
                                  int workers) {
    if (n > 2) throw Error("raw enumeration supports n <= 2");
    budget.validate();
    const unsigned S = 1u << n;
    const std::uint64_t fam_count = std::uint64_t{1} << S;
    std::uint64_t total = 1;
    for (unsigned i = 0; i < S; ++i) total *= fam_count;

    EnumerationResult res;
    std::uint64_t limit = total;
    if (budget.max_expansions < total) {
        limit = budget.max_expansions;
        res.budget_exhausted = true;
        res.complete = false;
    }

    auto build = [&](std::uint64_t t) {
        ObModel m(n);
        for (unsigned x = 0; x < S; ++x) {
            const std::uint64_t fam = (t >> (x * S)) & (fam_count - 1);
            for (unsigned y = 0; y < S; ++y)
                if (fam >> y & 1u) m.set(x, y);
        }
        return m;
    };

    DeadlineClock clock(budget);
    if (workers <= 1) {
        for (std::uint64_t t = 0; t < limit; ++t) {
            ++res.nodes;
            if ((t & 0xfff) == 0 && clock.expired()) {
                res.budget_exhausted = true;
                res.complete = false;
                return res;
            }
            ObModel m = build(t);
            if (satisfies_all(m, system, opts) && !sink(m)) {
                res.complete = false;
                return res;
            }
        }
        return res;
    }

    // Chunked scan; hits are merged in chunk order so the emitted stream is
    // identical for every worker count.
    const std::uint64_t chunk = std::max<std::uint64_t>(1, (limit + workers - 1) / workers);
    std::vector<std::future<std::vector<std::uint64_t>>> futures;
    for (std::uint64_t lo = 0; lo < limit; lo += chunk) {
        const std::uint64_t hi = std::min(limit, lo + chunk);
        futures.push_back(std::async(std::launch::async, [&, lo, hi] {
            std::vector<std::uint64_t> hits;
            for (std::uint64_t t = lo; t < hi; ++t)
                if (satisfies_all(build(t), system, opts)) hits.push_back(t);
            return hits;
        }));
    }
    res.nodes = limit;
    for (auto& f : futures)
        for (std::uint64_t t : f.get())
            if (!sink(build(t))) {
                res.complete = false;
                return res;
            }
    return res;
}

/// Pruned DFS over per-context trace sets; requires 5(b) in the system.
/// Supports n <= 4 (the per-context candidate lists grow as 2^(2^|X|)).
inline EnumerationResult dfs_traces(int n, const AxiomSystem& system,
                                    const std::function<bool(const ObModel&)>& sink,
                                    const SearchBudget& budget, const CheckOptions& opts) {
    if (!system.has(AxiomId::A5b))
        throw Error("compressed enumeration at n >= 3 requires 5b in the system");
    if (n > 4) throw Error("compressed enumeration supports n <= 4");
    budget.validate();
    const unsigned S = 1u << n;
    const bool a5a = system.has(AxiomId::A5a);
    const bool c_strong = system.has(AxiomId::A5cStrong);
    const bool c_weak = system.has(AxiomId::A5cWeak);
    const bool d5 = system.has(AxiomId::A5d);
    const bool e5 = system.has(AxiomId::A5e);
    const bool f5 = system.has(AxiomId::A5f);
    const bool g5 = system.has(AxiomId::A5g);
    if (g5 && !opts.a5g) throw Error("axiom formula unavailable: 5g has not been configured");

    auto closed_under_intersection = [&](std::uint32_t tm) {
        for (unsigned e1 = 0; e1 < S; ++e1) {
            if (!(tm >> e1 & 1u)) continue;
            for (unsigned e2 = e1; e2 < S; ++e2) {
                if (!(tm >> e2 & 1u)) continue;
                const unsigned meet = e1 & e2;
                if (c_weak && meet == 0) continue;
                if (!(tm >> meet & 1u)) return false;
            }
        }
        return true;
    };

    // Candidate trace sets per context, ascending (or seed-shuffled).
    std::vector<std::vector<std::uint32_t>> cand(S);
    for (unsigned C = 0; C < S; ++C) {
        std::uint32_t submask_bits = 0;  // bit e set <=> e ⊆ C
        for (unsigned e = 0; e < S; ++e)
            if ((e & ~C) == 0) submask_bits |= 1u << e;
        std::uint32_t tm = 0;
        while (true) {
            if (!(a5a && (tm & 1u)) && (!(c_strong || c_weak) || closed_under_intersection(tm)))
                cand[C].push_back(tm);
            if (tm == submask_bits) break;
            tm = (tm - submask_bits) & submask_bits;
        }
        if (budget.seed != 0) {
            std::mt19937_64 rng(budget.seed * 0x9e3779b97f4a7c15ull + C + 1);
            std::shuffle(cand[C].begin(), cand[C].end(), rng);
        }
    }

    std::vector<std::uint32_t> tr(S, 0);
    EnumerationResult res;
    DeadlineClock clock(budget);
    bool stop = false;

    auto admissible = [&](unsigned C, std::uint32_t tm) {
        if (d5) {
            for (unsigned X = (C - 1) & C;; X = (X - 1) & C) {  // proper submasks, descending
                for (unsigned T = 0; T < S; ++T) {
                    if (!(tr[X] >> T & 1u)) continue;
                    if (!(tm >> ((C & ~X) | T) & 1u)) return false;
                }
                if (X == 0) break;
            }
        }
        if (e5) {
            for (unsigned T = 0; T < S; ++T) {
                if (!(tm >> T & 1u)) continue;
                for (unsigned Y = (C - 1) & C;; Y = (Y - 1) & C) {
                    const unsigned meet = Y & T;
                    if (meet != 0 && !(tr[Y] >> meet & 1u)) return false;
                    if (Y == 0) break;
                }
            }
        }
        if (f5) {
            for (unsigned X1 = (C - 1) & C;; X1 = (X1 - 1) & C) {
                for (unsigned X2 = (C - 1) & C;; X2 = (X2 - 1) & C) {
                    if ((X1 | X2) == C) {
                        for (unsigned T1 = 0; T1 < S; ++T1) {
                            if (!(tr[X1] >> T1 & 1u)) continue;
                            for (unsigned T2 = 0; T2 < S; ++T2) {
                                if (!(tr[X2] >> T2 & 1u)) continue;
                                if ((T1 & X2) == (T2 & X1) && !(tm >> (T1 | T2) & 1u))
                                    return false;
                            }
                        }
                    }
                    if (X2 == 0) break;
                }
                if (X1 == 0) break;
            }
        }
        return true;
    };

    std::function<void(unsigned)> rec = [&](unsigned C) {
        if (stop) return;
        if (C == S) {
            ObModel m = model_from_traces(n, tr);
            if (g5 && check_axiom(m, AxiomId::A5g, opts)) return;
            if (!sink(m)) {
                stop = true;
                res.complete = false;
            }
            return;
        }
        for (std::uint32_t tm : cand[C]) {
            if (stop) return;
            if (++res.nodes > budget.max_expansions || ((res.nodes & 0xfff) == 0 && clock.expired())) {
                stop = true;
                res.budget_exhausted = true;
                res.complete = false;
                return;
            }
            // C = 0 has no proper submasks and only trivial cross checks.
            if (C == 0 || admissible(C, tm)) {
                tr[C] = tm;
                rec(C + 1);
            }
        }
        tr[C] = 0;
    };
    rec(0);
    return res;
}

}  // namespace detail

/// Streams every model over n worlds satisfying the system, each exactly
/// once, in canonical order. The sink returns false to stop early.
/// Preconditions: n <= 2 for raw enumeration; n == 3 requires 5(b).
inline EnumerationResult enumerate_models(int n, const AxiomSystem& system,
                                          const std::function<bool(const ObModel&)>& sink,
                                          const SearchBudget& budget = {},
                                          const CheckOptions& opts = {}, int workers = 1) {
    if (n < 0) throw Error("negative world count");
    if (n <= 2) return detail::raw_scan(n, system, sink, budget, opts, workers);
    if (n == 3) return detail::dfs_traces(n, system, sink, budget, opts);
    throw Error("model enumeration supports n <= 3 (n = 3 only with 5b)");
}

inline std::vector<ObModel> enumerate_models(int n, const AxiomSystem& system,
                                             const SearchBudget& budget = {},
                                             const CheckOptions& opts = {}, int workers = 1) {
    std::vector<ObModel> out;
    enumerate_models(
        n, system,
        [&](const ObModel& m) {
            out.push_back(m);
            return true;
        },
        budget, opts, workers);
    return out;
}

struct ClassifyAllResult {
    int n = 0;
    std::uint64_t total = 0;
    int no_obligations = 0;
    int avoid_none = 0;
    int avoid_only = 0;
    int not_cj97 = 0;
    std::optional<ObModel> not_cj97_witness;  // theorem-falsifying under CJ97
    EnumerationResult stats;

    std::vector<std::pair<std::string, int>> counts() const {
        return {{"noObligations", no_obligations},
                {"avoidNone", avoid_none},
                {"avoidOnly", avoid_only},
                {"notCJ97", not_cj97}};
    }
};

/// Classifies every enumerated model of the system.
inline ClassifyAllResult classify_all(int n, const AxiomSystem& system,
                                      const SearchBudget& budget = {},
                                      const CheckOptions& opts = {}, int workers = 1) {
    ClassifyAllResult r;
    r.n = n;
    r.stats = enumerate_models(
        n, system,
        [&](const ObModel& m) {
            ++r.total;
            const Classification c = classify(m);
            switch (c.kind) {
                case Classification::Kind::NoObligations: ++r.no_obligations; break;
                case Classification::Kind::AvoidNone: ++r.avoid_none; break;
                case Classification::Kind::AvoidOnly: ++r.avoid_only; break;
                case Classification::Kind::NotCJ97:
                    ++r.not_cj97;
                    if (!r.not_cj97_witness) r.not_cj97_witness = m;
                    break;
            }
            return true;
        },
        budget, opts, workers);
    return r;
}

struct IndependenceResult {
    enum class Status { Found, NoneExists, Inconclusive };

    Status status = Status::Inconclusive;
    int n = 0;  // model size where found, or the largest exhausted level
    std::optional<ObModel> model;
    std::optional<Violation> violation;
    std::uint64_t nodes = 0;
    std::string note;
};

/// Searches n = 1..max_n for a model satisfying every axiom in `hold` and
/// violating `fail`. The returned model is minimized at the smallest n where
/// one exists: fewest nonempty ob(X) entries, then least table encoding.
/// Levels n >= 3 need 5(b) in `hold` for compressed search and are otherwise
/// skipped (reported in the note; the result is then at best inconclusive).
inline IndependenceResult find_independence_witness(const std::vector<AxiomId>& hold, AxiomId fail,
                                                    int max_n = 4, const SearchBudget& budget = {},
                                                    const CheckOptions& opts = {}) {
    for (AxiomId a : hold)
        if (a == fail) throw Error("the failing axiom must not be in the hold set");
    budget.validate();
    AxiomSystem hold_system = AxiomSystem::of("hold", hold);

    IndependenceResult res;
    SearchBudget level_budget = budget;
    bool all_levels_complete = true;
    for (int n = 1; n <= max_n; ++n) {
        if (n >= 3 && !hold_system.has(AxiomId::A5b)) {
            res.note += (res.note.empty() ? "" : "; ") + std::string("skipped n=") +
                        std::to_string(n) + " (no 5b for compressed search)";
            all_levels_complete = false;
            continue;
        }
        if (level_budget.max_expansions <= res.nodes)
            level_budget.max_expansions = 1;  // force immediate budget stop
        else
            level_budget.max_expansions = budget.max_expansions - res.nodes;

        std::optional<ObModel> best;
        auto consider = [&](const ObModel& m) {
            if (!check_axiom(m, fail, opts)) return true;  // fail must be violated
            if (!best || m.nonempty_context_count() < best->nonempty_context_count() ||
                (m.nonempty_context_count() == best->nonempty_context_count() &&
                 table_less(m, *best)))
                best = m;
            return true;
        };
        EnumerationResult stats =
            n <= 2 ? detail::raw_scan(n, hold_system, consider, level_budget, opts, 1)
                   : detail::dfs_traces(n, hold_system, consider, level_budget, opts);
        res.nodes += stats.nodes;
        if (best) {
            res.status = IndependenceResult::Status::Found;
            res.n = n;
            res.model = best;
            res.violation = check_axiom(*best, fail, opts);
            if (!stats.complete)
                res.note += (res.note.empty() ? "" : "; ") +
                            std::string("budget exhausted at n=") + std::to_string(n) +
                            "; witness minimal within the explored region only";
            return res;
        }
        if (!stats.complete) {
            res.status = IndependenceResult::Status::Inconclusive;
            res.n = n;
            res.note += (res.note.empty() ? "" : "; ") + std::string("budget exhausted at n=") +
                        std::to_string(n);
            return res;
        }
        res.n = n;
    }
    res.status = all_levels_complete ? IndependenceResult::Status::NoneExists
                                     : IndependenceResult::Status::Inconclusive;
    if (!all_levels_complete && res.note.empty()) res.note = "some levels skipped";
    return res;
}

}  // namespace ctd

#endif  // CTD_SEARCH_HPP
