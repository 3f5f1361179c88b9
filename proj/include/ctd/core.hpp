#ifndef CTD_CORE_HPP
#define CTD_CORE_HPP

#include <array>
#include <bit>
#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

// Finite power-set algebra over a world set W = {0, ..., n-1}, n <= 8.
// Everything downstream (axiom checks, model constructors, closure, search)
// is built on these three value types:
//
//   StateSet  - a subset of W, encoded as a bitmask (world i -> bit i)
//   Family    - a set of StateSets, a bit-vector indexed by StateSet encoding
//   ObModel   - the map X -> ob(X) over all 2^n contexts
//
// All values are immutable after construction as far as the public API is
// concerned; operations are pure and safe to evaluate concurrently.

namespace ctd {

inline constexpr int kMaxWorlds = 8;

using WorldId = int;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A subset of the world set, tagged with the ambient world count n.
/// Doubles as "context" and "proposition". Mixing sets with different
/// ambient n is a usage error (asserted).
class StateSet {
public:
    StateSet() = default;

    StateSet(int n, unsigned bits) : bits_(static_cast<std::uint16_t>(bits)), n_(static_cast<std::uint8_t>(n)) {
        assert(n >= 0 && n <= kMaxWorlds);
        assert(bits < (1u << n));
    }

    static StateSet empty_set(int n) { return StateSet(n, 0); }
    static StateSet universe(int n) { return StateSet(n, (1u << n) - 1); }
    static StateSet singleton(int n, WorldId w) {
        assert(w >= 0 && w < n);
        return StateSet(n, 1u << w);
    }

    int n() const { return n_; }
    unsigned encoding() const { return bits_; }

    bool contains(WorldId w) const { return w >= 0 && w < n_ && (bits_ >> w & 1u); }
    bool empty() const { return bits_ == 0; }
    int size() const { return std::popcount(static_cast<unsigned>(bits_)); }

    StateSet with(WorldId w) const {
        assert(w >= 0 && w < n_);
        return StateSet(n_, bits_ | (1u << w));
    }
    StateSet without(WorldId w) const {
        assert(w >= 0 && w < n_);
        return StateSet(n_, bits_ & ~(1u << w));
    }

    /// Complement relative to W.
    StateSet complement() const { return StateSet(n_, ~bits_ & mask()); }

    friend StateSet operator&(StateSet a, StateSet b) {
        assert(a.n_ == b.n_);
        return StateSet(a.n_, a.bits_ & b.bits_);
    }
    friend StateSet operator|(StateSet a, StateSet b) {
        assert(a.n_ == b.n_);
        return StateSet(a.n_, a.bits_ | b.bits_);
    }
    /// Set difference a \ b.
    friend StateSet operator-(StateSet a, StateSet b) {
        assert(a.n_ == b.n_);
        return StateSet(a.n_, a.bits_ & ~b.bits_);
    }

    bool subset_of(StateSet other) const {
        assert(n_ == other.n_);
        return (bits_ & ~other.bits_) == 0;
    }
    bool intersects(StateSet other) const {
        assert(n_ == other.n_);
        return (bits_ & other.bits_) != 0;
    }

    friend bool operator==(StateSet a, StateSet b) { return a.n_ == b.n_ && a.bits_ == b.bits_; }
    friend bool operator!=(StateSet a, StateSet b) { return !(a == b); }
    /// Encoding order; used for deterministic (lexicographically least) witnesses.
    friend bool operator<(StateSet a, StateSet b) {
        assert(a.n_ == b.n_);
        return a.bits_ < b.bits_;
    }

    /// Debug rendering with world indices, e.g. "{0,2}".
    std::string to_string() const {
        std::string out = "{";
        bool first = true;
        for (int w = 0; w < n_; ++w) {
            if (!contains(w)) continue;
            if (!first) out += ",";
            out += std::to_string(w);
            first = false;
        }
        return out + "}";
    }

private:
    unsigned mask() const { return (1u << n_) - 1; }

    std::uint16_t bits_ = 0;
    std::uint8_t n_ = 0;
};

/// Calls f(s) for every subset s of base, in ascending encoding order.
/// 2^|base| subsets, each exactly once.
template <typename F>
void for_each_subset(StateSet base, F&& f) {
    const unsigned m = base.encoding();
    unsigned s = 0;
    while (true) {
        f(StateSet(base.n(), s));
        if (s == m) break;
        s = (s - m) & m;  // next submask in ascending order
    }
}

inline std::vector<StateSet> subsets_of(StateSet base) {
    std::vector<StateSet> out;
    out.reserve(1u << base.size());
    for_each_subset(base, [&](StateSet s) { out.push_back(s); });
    return out;
}

/// Calls f(s) for every subset of W in ascending encoding order.
template <typename F>
void for_each_set(int n, F&& f) {
    for (unsigned e = 0; e < (1u << n); ++e) f(StateSet(n, e));
}

/// A set of StateSets over a common ambient n: the value ob(X).
/// Canonical representation: bit e set <=> the set with encoding e is a member.
class Family {
public:
    Family() = default;
    explicit Family(int n) : n_(static_cast<std::uint8_t>(n)) { assert(n >= 0 && n <= kMaxWorlds); }

    int n() const { return n_; }

    bool contains(StateSet s) const {
        assert(s.n() == n_);
        return test(s.encoding());
    }
    bool test(unsigned encoding) const {
        return (words_[encoding >> 6] >> (encoding & 63) & 1u) != 0;
    }

    void insert(StateSet s) {
        assert(s.n() == n_);
        set(s.encoding());
    }
    void set(unsigned encoding) {
        assert(encoding < (1u << n_));
        words_[encoding >> 6] |= std::uint64_t{1} << (encoding & 63);
    }
    void erase(StateSet s) {
        assert(s.n() == n_);
        words_[s.encoding() >> 6] &= ~(std::uint64_t{1} << (s.encoding() & 63));
    }

    bool empty() const { return (words_[0] | words_[1] | words_[2] | words_[3]) == 0; }
    int size() const {
        int c = 0;
        for (auto w : words_) c += std::popcount(w);
        return c;
    }

    bool subset_of(const Family& other) const {
        assert(n_ == other.n_);
        for (int i = 0; i < 4; ++i)
            if (words_[i] & ~other.words_[i]) return false;
        return true;
    }

    friend bool operator==(const Family& a, const Family& b) { return a.n_ == b.n_ && a.words_ == b.words_; }
    friend bool operator!=(const Family& a, const Family& b) { return !(a == b); }

    /// Member sets in ascending encoding order.
    std::vector<StateSet> members() const {
        std::vector<StateSet> out;
        for (unsigned e = 0; e < (1u << n_); ++e)
            if (test(e)) out.push_back(StateSet(n_, e));
        return out;
    }

    template <typename F>
    void for_each(F&& f) const {
        for (unsigned e = 0; e < (1u << n_); ++e)
            if (test(e)) f(StateSet(n_, e));
    }

    /// The 2^n-bit member mask as a little-endian word array (encoding order).
    const std::array<std::uint64_t, 4>& raw() const { return words_; }

private:
    std::array<std::uint64_t, 4> words_{};
    std::uint8_t n_ = 0;
};

/// The full conditional-obligation function: table[encode(X)] = ob(X).
class ObModel {
public:
    ObModel() = default;
    explicit ObModel(int n) : n_(n), table_(std::size_t{1} << n, Family(n)) {
        assert(n >= 0 && n <= kMaxWorlds);
    }

    int n() const { return n_; }
    int context_count() const { return 1 << n_; }

    const Family& operator[](StateSet x) const {
        assert(x.n() == n_);
        return table_[x.encoding()];
    }
    const Family& family_at(unsigned encoding) const { return table_[encoding]; }

    bool contains(StateSet x, StateSet y) const { return (*this)[x].contains(y); }

    /// Returns a copy of this model with y added to ob(x).
    ObModel add(StateSet x, StateSet y) const {
        ObModel out = *this;
        out.insert(x, y);
        return out;
    }

    /// In-place insertion; for construction code paths only.
    void insert(StateSet x, StateSet y) {
        assert(x.n() == n_ && y.n() == n_);
        table_[x.encoding()].insert(y);
    }
    void set(unsigned context_encoding, unsigned member_encoding) {
        table_[context_encoding].set(member_encoding);
    }

    int membership_count() const {
        int c = 0;
        for (const auto& f : table_) c += f.size();
        return c;
    }
    int nonempty_context_count() const {
        int c = 0;
        for (const auto& f : table_) c += f.empty() ? 0 : 1;
        return c;
    }

    friend bool operator==(const ObModel& a, const ObModel& b) { return a.n_ == b.n_ && a.table_ == b.table_; }
    friend bool operator!=(const ObModel& a, const ObModel& b) { return !(a == b); }

private:
    int n_ = 0;
    std::vector<Family> table_;
};

/// Pointwise inclusion: X in a.ob(Y) implies X in b.ob(Y). The partial order
/// under which "least model" is defined.
inline bool pointwise_leq(const ObModel& a, const ObModel& b) {
    assert(a.n() == b.n());
    for (int x = 0; x < a.context_count(); ++x)
        if (!a.family_at(x).subset_of(b.family_at(x))) return false;
    return true;
}

/// Strict order on whole tables: fewest memberships are not compared here;
/// this is the plain numeric order on the table encoding
/// sum_X fam(X) * (2^(2^n))^X, i.e. most significant context last.
inline bool table_less(const ObModel& a, const ObModel& b) {
    assert(a.n() == b.n());
    for (int x = a.context_count() - 1; x >= 0; --x) {
        const auto& wa = a.family_at(x).raw();
        const auto& wb = b.family_at(x).raw();
        for (int i = 3; i >= 0; --i) {
            if (wa[i] != wb[i]) return wa[i] < wb[i];
        }
    }
    return false;
}

}  // namespace ctd

#endif  // CTD_CORE_HPP
