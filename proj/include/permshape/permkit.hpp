#pragma once

// Permutations in one-line notation, pattern containment, brute-force avoider
// enumeration and the scalar statistics.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "pattern_class.hpp"

namespace permshape {

/// A permutation of {1..n} in one-line notation. Positions are 1-based in the
/// accessors: sigma(i) for 1 <= i <= n.
class Permutation {
public:
    Permutation() = default;

    explicit Permutation(std::vector<unsigned> values) : values_(std::move(values)) {
        std::vector<bool> seen(values_.size() + 1, false);
        for (unsigned v : values_) {
            if (v < 1 || v > values_.size() || seen[v])
                throw domain_error("not a permutation of 1.." + std::to_string(values_.size()) + ": " +
                                   to_string());
            seen[v] = true;
        }
    }

    Permutation(std::initializer_list<unsigned> values) : Permutation(std::vector<unsigned>(values)) {}

    static Permutation identity(unsigned n) {
        std::vector<unsigned> v(n);
        for (unsigned i = 0; i < n; ++i) v[i] = i + 1;
        return Permutation(std::move(v), trusted{});
    }

    /// Builds without validation; for callers that construct bijections by design.
    static Permutation from_trusted(std::vector<unsigned> values) { return Permutation(std::move(values), trusted{}); }

    unsigned size() const { return static_cast<unsigned>(values_.size()); }
    unsigned operator()(unsigned i) const { return values_[i - 1]; }
    const std::vector<unsigned>& values() const { return values_; }
    std::span<const unsigned> view() const { return values_; }

    Permutation inverse() const {
        std::vector<unsigned> inv(values_.size());
        for (unsigned i = 0; i < values_.size(); ++i) inv[values_[i] - 1] = i + 1;
        return Permutation(std::move(inv), trusted{});
    }

    /// (sigma(n), ..., sigma(1))
    Permutation reverse() const {
        return Permutation(std::vector<unsigned>(values_.rbegin(), values_.rend()), trusted{});
    }

    /// i -> n+1-sigma(i)
    Permutation complement() const {
        std::vector<unsigned> c(values_);
        for (auto& v : c) v = size() + 1 - v;
        return Permutation(std::move(c), trusted{});
    }

    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (i) s += ' ';
            s += std::to_string(values_[i]);
        }
        return s;
    }

    auto operator<=>(const Permutation&) const = default;
    bool operator==(const Permutation&) const = default;

private:
    struct trusted {};
    Permutation(std::vector<unsigned> values, trusted) : values_(std::move(values)) {}

    std::vector<unsigned> values_;
};

/// A pattern is a permutation; the six members of S_3 have named shortcuts.
class Pattern {
public:
    explicit Pattern(Permutation p) : perm_(std::move(p)) {
        if (perm_.size() == 0) throw domain_error("empty pattern");
    }

    static Pattern of(PatternClass c) {
        switch (c) {
            case PatternClass::p123: return Pattern({1, 2, 3});
            case PatternClass::p132: return Pattern({1, 3, 2});
            case PatternClass::p321: return Pattern({3, 2, 1});
            case PatternClass::p231: return Pattern({2, 3, 1});
            case PatternClass::unrestricted: break;
        }
        throw domain_error("the unrestricted class has no pattern");
    }

    static Pattern parse(const std::string& digits) {
        std::vector<unsigned> v;
        for (char ch : digits) {
            if (ch < '1' || ch > '9') throw domain_error("pattern must be a digit string, got '" + digits + "'");
            v.push_back(static_cast<unsigned>(ch - '0'));
        }
        return Pattern(Permutation(std::move(v)));
    }

    /// All six patterns of length 3 in lexicographic order.
    static std::vector<Pattern> all_of_length3() {
        return {Pattern({1, 2, 3}), Pattern({1, 3, 2}), Pattern({2, 1, 3}),
                Pattern({2, 3, 1}), Pattern({3, 1, 2}), Pattern({3, 2, 1})};
    }

    const Permutation& perm() const { return perm_; }
    unsigned size() const { return perm_.size(); }
    std::string name() const {
        std::string s;
        for (unsigned v : perm_.values()) s += std::to_string(v);
        return s;
    }
    bool operator==(const Pattern&) const = default;

private:
    Pattern(std::initializer_list<unsigned> v) : perm_(v) {}
    Permutation perm_;
};

// ---------------------------------------------------------------------------
// Containment

/// 1-based positions of one occurrence of a pattern.
using Occurrence = std::vector<unsigned>;

namespace detail {

using Seq = std::span<const unsigned>;

// Occurrence of 123 (or 321 when `down`) in O(n) from prefix extrema and suffix extrema.
inline std::optional<Occurrence> find_monotone3(Seq s, bool down) {
    const std::size_t n = s.size();
    if (n < 3) return std::nullopt;
    auto better = [down](unsigned x, unsigned y) { return down ? x > y : x < y; };  // x "before" y in the run
    std::vector<std::size_t> suffix(n);  // index of the suffix extremum from i on
    suffix[n - 1] = n - 1;
    for (std::size_t i = n - 1; i-- > 0;) suffix[i] = better(s[i], s[suffix[i + 1]]) ? suffix[i + 1] : i;
    std::size_t pre = 0;
    for (std::size_t j = 1; j + 1 < n; ++j) {
        if (better(s[pre], s[j]) && better(s[j], s[suffix[j + 1]]))
            return Occurrence{static_cast<unsigned>(pre + 1), static_cast<unsigned>(j + 1),
                              static_cast<unsigned>(suffix[j + 1] + 1)};
        if (better(s[j], s[pre])) pre = j;
    }
    return std::nullopt;
}

// Occurrence of 132 in O(n): scan right to left keeping a stack of candidates for
// the "3"; every pop yields a larger candidate for the "2".
inline std::optional<Occurrence> find_132(Seq s) {
    const std::size_t n = s.size();
    std::vector<std::size_t> stack;
    std::size_t two = n, three = n;  // n means none yet
    for (std::size_t i = n; i-- > 0;) {
        if (two != n && s[i] < s[two])
            return Occurrence{static_cast<unsigned>(i + 1), static_cast<unsigned>(three + 1),
                              static_cast<unsigned>(two + 1)};
        while (!stack.empty() && s[stack.back()] < s[i]) {
            two = stack.back();
            three = i;
            stack.pop_back();
        }
        stack.push_back(i);
    }
    return std::nullopt;
}

inline std::vector<unsigned> reversed(Seq s) { return {s.rbegin(), s.rend()}; }

inline std::vector<unsigned> complemented(Seq s) {
    unsigned top = 0;
    for (unsigned v : s) top = std::max(top, v);
    std::vector<unsigned> c(s.begin(), s.end());
    for (auto& v : c) v = top + 1 - v;
    return c;
}

inline Occurrence unreverse(Occurrence o, std::size_t n) {
    for (auto& i : o) i = static_cast<unsigned>(n + 1 - i);
    std::reverse(o.begin(), o.end());
    return o;
}

// Generic backtracking: choose positions left to right, keeping every chosen pair in
// the same relative order as the pattern.
inline bool backtrack(Seq s, Seq pat, std::vector<unsigned>& pos, std::size_t start) {
    const std::size_t t = pos.size();
    if (t == pat.size()) return true;
    const std::size_t left = pat.size() - t;
    for (std::size_t i = start; i + left <= s.size(); ++i) {
        bool ok = true;
        for (std::size_t q = 0; q < t && ok; ++q) ok = (pat[q] < pat[t]) == (s[pos[q]] < s[i]);
        if (!ok) continue;
        pos.push_back(static_cast<unsigned>(i));
        if (backtrack(s, pat, pos, i + 1)) return true;
        pos.pop_back();
    }
    return false;
}

}  // namespace detail

/// One occurrence of `pat` in any sequence of distinct integers (only relative
/// order matters). Length-3 patterns run in O(n); longer ones backtrack.
inline std::optional<Occurrence> find_occurrence(std::span<const unsigned> s, const Pattern& pat) {
    if (pat.size() > s.size()) return std::nullopt;
    if (pat.size() == 3) {
        const auto name = pat.name();
        if (name == "123") return detail::find_monotone3(s, false);
        if (name == "321") return detail::find_monotone3(s, true);
        if (name == "132") return detail::find_132(s);
        if (name == "312") return detail::find_132(detail::complemented(s));
        if (name == "231") {
            auto o = detail::find_132(detail::reversed(s));
            if (o) return detail::unreverse(*o, s.size());
            return std::nullopt;
        }
        if (name == "213") {
            auto o = detail::find_132(detail::reversed(detail::complemented(s)));
            if (o) return detail::unreverse(*o, s.size());
            return std::nullopt;
        }
    }
    std::vector<unsigned> pos;
    if (!detail::backtrack(s, pat.perm().view(), pos, 0)) return std::nullopt;
    for (auto& p : pos) ++p;
    return pos;
}

inline bool contains(const Permutation& sigma, const Pattern& pat) {
    return find_occurrence(sigma.view(), pat).has_value();
}

inline bool avoids(const Permutation& sigma, PatternClass c) {
    if (c == PatternClass::unrestricted) return true;
    return !contains(sigma, Pattern::of(c));
}

// ---------------------------------------------------------------------------
// Enumeration

inline constexpr unsigned max_enumeration_n = 12;

/// Calls fn on every permutation of size n avoiding `pat`, in lexicographic order.
/// Prefixes that already contain the pattern are pruned.
inline void for_each_avoider(unsigned n, const Pattern& pat, const std::function<void(const Permutation&)>& fn) {
    if (n > max_enumeration_n)
        throw domain_error("enumerate_avoiders: n=" + std::to_string(n) + " exceeds the bound " +
                           std::to_string(max_enumeration_n));
    std::vector<unsigned> prefix;
    std::vector<bool> used(n + 1, false);
    std::function<void()> rec = [&] {
        if (prefix.size() == n) {
            fn(Permutation::from_trusted(prefix));
            return;
        }
        for (unsigned v = 1; v <= n; ++v) {
            if (used[v]) continue;
            prefix.push_back(v);
            if (!find_occurrence(prefix, pat)) {
                used[v] = true;
                rec();
                used[v] = false;
            }
            prefix.pop_back();
        }
    };
    rec();
}

inline std::vector<Permutation> enumerate_avoiders(unsigned n, const Pattern& pat) {
    std::vector<Permutation> out;
    for_each_avoider(n, pat, [&](const Permutation& p) { out.push_back(p); });
    return out;
}

inline std::vector<Permutation> enumerate_class(unsigned n, PatternClass c) {
    if (c != PatternClass::unrestricted) return enumerate_avoiders(n, Pattern::of(c));
    if (n > max_enumeration_n) throw domain_error("enumerate_class: n too large");
    std::vector<Permutation> out;
    auto p = Permutation::identity(n).values();
    do out.push_back(Permutation::from_trusted(p));
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

// ---------------------------------------------------------------------------
// Statistics

enum class StatKind { fp, afp, ldr, rmax, lis, rank, chi2, first, last };

inline std::string name(StatKind k) {
    switch (k) {
        case StatKind::fp: return "fp";
        case StatKind::afp: return "afp";
        case StatKind::ldr: return "ldr";
        case StatKind::rmax: return "rmax";
        case StatKind::lis: return "lis";
        case StatKind::rank: return "rank";
        case StatKind::chi2: return "chi2";
        case StatKind::first: return "first";
        case StatKind::last: return "last";
    }
    return "?";
}

inline StatKind parse_stat_kind(const std::string& s) {
    for (auto k : {StatKind::fp, StatKind::afp, StatKind::ldr, StatKind::rmax, StatKind::lis, StatKind::rank,
                   StatKind::chi2, StatKind::first, StatKind::last})
        if (name(k) == s) return k;
    throw domain_error("unknown statistic '" + s + "'");
}

inline unsigned fixed_points(const Permutation& s) {
    unsigned c = 0;
    for (unsigned i = 1; i <= s.size(); ++i) c += s(i) == i;
    return c;
}

/// #{i : sigma(i) = n+1-i}
inline unsigned anti_fixed_points(const Permutation& s) {
    unsigned c = 0;
    for (unsigned i = 1; i <= s.size(); ++i) c += s(i) == s.size() + 1 - i;
    return c;
}

/// Length of the leftmost decreasing run sigma(1) > sigma(2) > ... > sigma(i).
inline unsigned leftmost_decreasing_run(const Permutation& s) {
    if (s.size() == 0) return 0;
    unsigned i = 1;
    while (i < s.size() && s(i + 1) < s(i)) ++i;
    return i;
}

inline unsigned right_to_left_maxima(const Permutation& s) {
    unsigned c = 0, best = 0;
    for (unsigned i = s.size(); i >= 1; --i)
        if (s(i) > best) {
            best = s(i);
            ++c;
        }
    return c;
}

/// Patience sorting: pile tops stay sorted, binary search per card.
inline unsigned longest_increasing_subsequence(const Permutation& s) {
    std::vector<unsigned> tops;
    for (unsigned v : s.values()) {
        auto it = std::lower_bound(tops.begin(), tops.end(), v);
        if (it == tops.end()) tops.push_back(v);
        else *it = v;
    }
    return static_cast<unsigned>(tops.size());
}

/// Sum over i of min{(n+1-sigma(i)-i)^2, (2n-sigma(i)-i)^2}.
inline std::int64_t chi2(const Permutation& s) {
    const std::int64_t n = s.size();
    std::int64_t total = 0;
    for (unsigned i = 1; i <= s.size(); ++i) {
        const std::int64_t a = n + 1 - s(i) - static_cast<std::int64_t>(i);
        const std::int64_t b = 2 * n - s(i) - static_cast<std::int64_t>(i);
        total += std::min(a * a, b * b);
    }
    return total;
}

/// Largest r in {0..n} with sigma(i) > lambda*r for all i <= r (real comparison).
/// The condition is monotone in r since the prefix minimum only falls.
inline unsigned rank_lambda(const Permutation& s, double lambda) {
    if (!(lambda > 0)) throw domain_error("rank_lambda requires lambda > 0");
    unsigned r = 0;
    unsigned prefix_min = s.size() + 1;
    while (r < s.size()) {
        prefix_min = std::min(prefix_min, s(r + 1));
        if (!(static_cast<double>(prefix_min) > lambda * (r + 1))) break;
        ++r;
    }
    return r;
}

struct StatValue {
    StatKind kind = StatKind::fp;
    std::int64_t value = 0;
};

inline StatValue stat(const Permutation& s, StatKind kind, double lambda = 1.0) {
    switch (kind) {
        case StatKind::fp: return {kind, fixed_points(s)};
        case StatKind::afp: return {kind, anti_fixed_points(s)};
        case StatKind::ldr: return {kind, leftmost_decreasing_run(s)};
        case StatKind::rmax: return {kind, right_to_left_maxima(s)};
        case StatKind::lis: return {kind, longest_increasing_subsequence(s)};
        case StatKind::rank: return {kind, rank_lambda(s, lambda)};
        case StatKind::chi2: return {kind, chi2(s)};
        case StatKind::first: return {kind, s.size() ? s(1) : 0};
        case StatKind::last: return {kind, s.size() ? s(s.size()) : 0};
    }
    return {kind, 0};
}

/// Left-to-right minima as 1-based positions.
inline std::vector<unsigned> left_to_right_minima(const Permutation& s) {
    std::vector<unsigned> pos;
    unsigned best = s.size() + 1;
    for (unsigned i = 1; i <= s.size(); ++i)
        if (s(i) < best) {
            best = s(i);
            pos.push_back(i);
        }
    return pos;
}

}  // namespace permshape
