#pragma once

// Dyck paths, the removal bijection onto 132-avoiders, Simion-Schmidt between
// 123- and 132-avoiders, and exactly uniform samplers for every class.

#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "pattern_class.hpp"
#include "permkit.hpp"

namespace permshape {

/// Balanced word over {U, D} of length 2n whose prefixes never dip below zero.
/// Stored as true = up.
class DyckPath {
public:
    DyckPath() = default;

    explicit DyckPath(std::vector<bool> steps) : steps_(std::move(steps)) { validate(); }

    /// Accepts 'u'/'U' and 'd'/'D'.
    static DyckPath parse(const std::string& word) {
        std::vector<bool> steps;
        steps.reserve(word.size());
        for (char ch : word) {
            if (ch == 'u' || ch == 'U') steps.push_back(true);
            else if (ch == 'd' || ch == 'D') steps.push_back(false);
            else throw domain_error(std::string("Dyck word has a letter other than u/d: '") + ch + "'");
        }
        return DyckPath(std::move(steps));
    }

    unsigned semilength() const { return static_cast<unsigned>(steps_.size() / 2); }
    const std::vector<bool>& steps() const { return steps_; }

    /// Height y at the start of each downstep, in path order.
    std::vector<unsigned> levels() const {
        std::vector<unsigned> y;
        y.reserve(semilength());
        unsigned h = 0;
        for (bool up : steps_) {
            if (up) ++h;
            else y.push_back(h--);
        }
        return y;
    }

    /// Returns to the axis after the start (the touch points other than the origin).
    unsigned returns() const {
        unsigned c = 0;
        long h = 0;
        for (bool up : steps_) {
            h += up ? 1 : -1;
            c += h == 0;
        }
        return c;
    }

    std::string to_string() const {
        std::string s;
        for (bool up : steps_) s += up ? 'u' : 'd';
        return s;
    }

    bool operator==(const DyckPath&) const = default;
    auto operator<=>(const DyckPath& o) const { return to_string() <=> o.to_string(); }

private:
    void validate() const {
        long h = 0;
        for (std::size_t i = 0; i < steps_.size(); ++i) {
            h += steps_[i] ? 1 : -1;
            if (h < 0) throw domain_error("Dyck word drops below the axis at step " + std::to_string(i + 1));
        }
        if (h != 0) throw domain_error("Dyck word does not return to the axis");
    }

    std::vector<bool> steps_;
};

/// All Dyck paths of semilength n in lexicographic order (u < d). Small n only.
inline std::vector<DyckPath> enumerate_dyck(unsigned n) {
    if (n > 14) throw domain_error("enumerate_dyck: n too large");
    std::vector<DyckPath> out;
    std::vector<bool> w;
    auto rec = [&](auto&& self, unsigned ups, unsigned downs) -> void {
        if (ups == n && downs == n) {
            out.emplace_back(w);
            return;
        }
        if (ups < n) {
            w.push_back(true);
            self(self, ups + 1, downs);
            w.pop_back();
        }
        if (downs < ups) {
            w.push_back(false);
            self(self, ups, downs + 1);
            w.pop_back();
        }
    };
    rec(rec, 0, 0);
    return out;
}

// ---------------------------------------------------------------------------
// Random numbers

/// Deterministic 64-bit generator: std::mt19937_64 seeded from splitmix64(seed).
/// Bounded draws use Lemire's multiply-shift rejection so that the stream of
/// outputs, not just the engine, is fixed by the seed.
///
/// Independent streams: stream(seed, i) seeds from splitmix64(seed ^ splitmix64(i + 1)).
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

    static SeededRng stream(std::uint64_t seed, std::uint64_t index) {
        return SeededRng(seed ^ splitmix64(index + 1));
    }

    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ull;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw domain_error("SeededRng::below(0)");
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = -bound % bound;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(next()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

// ---------------------------------------------------------------------------
// Order-statistic tree over slots 1..n

namespace detail {

class Fenwick {
public:
    explicit Fenwick(unsigned n, bool full) : n_(n), tree_(n + 1, 0) {
        if (full)
            for (unsigned i = 1; i <= n; ++i) {
                tree_[i] += 1;
                const unsigned up = i + (i & (~i + 1));
                if (up <= n) tree_[up] += tree_[i];
            }
        log_ = 1;
        while (log_ * 2 <= n_) log_ *= 2;
    }

    void add(unsigned i, int delta) {
        for (; i <= n_; i += i & (~i + 1)) tree_[i] += delta;
    }

    int prefix(unsigned i) const {
        int s = 0;
        for (; i > 0; i -= i & (~i + 1)) s += tree_[i];
        return s;
    }

    /// Smallest slot whose prefix count reaches r (r >= 1).
    unsigned select(int r) const {
        unsigned pos = 0;
        for (unsigned step = log_; step > 0; step >>= 1)
            if (pos + step <= n_ && tree_[pos + step] < r) {
                pos += step;
                r -= tree_[pos];
            }
        return pos + 1;
    }

private:
    unsigned n_;
    unsigned log_;
    std::vector<int> tree_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// The removal bijection

/// Start from the string (n, n-1, ..., 1); for the i-th downstep at level y_i remove
/// the y_i-th remaining entry and write it as tau(i). The result avoids 132.
inline Permutation phi(const DyckPath& gamma) {
    const unsigned n = gamma.semilength();
    const auto y = gamma.levels();
    detail::Fenwick slots(n, true);  // slot p holds value n+1-p
    std::vector<unsigned> tau(n);
    for (unsigned i = 0; i < n; ++i) {
        const unsigned p = slots.select(static_cast<int>(y[i]));
        slots.add(p, -1);
        tau[i] = n + 1 - p;
    }
    return Permutation::from_trusted(std::move(tau));
}

/// Inverse of phi. The level of downstep i is 1 + #(remaining values above tau(i)),
/// and the number of upsteps before it is y_i - y_{i-1} + 1 (with y_0 = 1).
inline DyckPath phi_inv(const Permutation& tau) {
    if (auto occ = find_occurrence(tau.view(), Pattern::of(PatternClass::p132))) {
        const auto& o = *occ;
        throw domain_error("phi_inv: input contains 132 at positions (" + std::to_string(o[0]) + "," +
                           std::to_string(o[1]) + "," + std::to_string(o[2]) + ") with values (" +
                           std::to_string(tau(o[0])) + "," + std::to_string(tau(o[1])) + "," +
                           std::to_string(tau(o[2])) + ")");
    }
    const unsigned n = tau.size();
    detail::Fenwick remaining(n, true);  // indexed by value
    std::vector<bool> steps;
    steps.reserve(2 * n);
    long prev = 1;
    for (unsigned i = 1; i <= n; ++i) {
        const unsigned v = tau(i);
        const long y = 1 + (static_cast<long>(n - i + 1) - remaining.prefix(v));
        remaining.add(v, -1);
        steps.insert(steps.end(), static_cast<std::size_t>(y - prev + 1), true);
        steps.push_back(false);
        prev = y;
    }
    return DyckPath(std::move(steps));
}

// ---------------------------------------------------------------------------
// Simion-Schmidt

/// 123-avoider -> 132-avoider. Left-to-right minima stay put; each other position,
/// left to right, gets the smallest unused value above the current minimum.
inline Permutation map_123_132(const Permutation& sigma) {
    if (contains(sigma, Pattern::of(PatternClass::p123)))
        throw domain_error("map_123_132: input " + sigma.to_string() + " contains 123");
    const unsigned n = sigma.size();
    const auto minima = left_to_right_minima(sigma);
    std::vector<bool> is_min(n + 1, false), used(n + 2, false);
    for (unsigned p : minima) {
        is_min[p] = true;
        used[sigma(p)] = true;
    }
    std::vector<unsigned> out(n);
    unsigned cur = n + 1;
    for (unsigned i = 1; i <= n; ++i) {
        if (is_min[i]) {
            cur = sigma(i);
            out[i - 1] = cur;
            continue;
        }
        unsigned v = cur + 1;
        while (used[v]) ++v;
        used[v] = true;
        out[i - 1] = v;
    }
    return Permutation::from_trusted(std::move(out));
}

/// 132-avoider -> 123-avoider: minima stay put, the others take the unused values in
/// decreasing order.
inline Permutation map_132_123(const Permutation& tau) {
    if (contains(tau, Pattern::of(PatternClass::p132)))
        throw domain_error("map_132_123: input " + tau.to_string() + " contains 132");
    const unsigned n = tau.size();
    const auto minima = left_to_right_minima(tau);
    std::vector<bool> is_min(n + 1, false), used(n + 1, false);
    for (unsigned p : minima) {
        is_min[p] = true;
        used[tau(p)] = true;
    }
    std::vector<unsigned> out(n);
    unsigned v = n;
    for (unsigned i = 1; i <= n; ++i) {
        if (is_min[i]) {
            out[i - 1] = tau(i);
            continue;
        }
        while (used[v]) --v;
        used[v] = true;
        out[i - 1] = v;
    }
    return Permutation::from_trusted(std::move(out));
}

// ---------------------------------------------------------------------------
// Samplers

/// Uniform over the C_n Dyck paths. Shuffle n ups and n+1 downs, rotate the word to
/// start just after the first global minimum of its prefix sums, drop the final down.
inline DyckPath sample_dyck(unsigned n, SeededRng& rng) {
    if (n == 0) throw domain_error("sample_dyck requires n >= 1");
    std::vector<bool> w(2 * n + 1, false);
    std::fill(w.begin(), w.begin() + n, true);
    rng.shuffle(w);
    long h = 0, low = 1;
    std::size_t cut = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        h += w[i] ? 1 : -1;
        if (h < low) {
            low = h;
            cut = i + 1;
        }
    }
    std::vector<bool> steps;
    steps.reserve(2 * n);
    for (std::size_t i = 0; i + 1 < w.size(); ++i) steps.push_back(w[(cut + i) % w.size()]);
    return DyckPath(std::move(steps));
}

inline Permutation sample_uniform(unsigned n, SeededRng& rng) {
    auto v = Permutation::identity(n).values();
    rng.shuffle(v);
    return Permutation::from_trusted(std::move(v));
}

/// Exactly uniform sample from S_n(pattern), or from S_n for the unrestricted class.
inline Permutation sample_avoider(unsigned n, PatternClass pattern, SeededRng& rng) {
    if (n == 0) throw domain_error("sample_avoider requires n >= 1");
    switch (pattern) {
        case PatternClass::p132: return phi(sample_dyck(n, rng));
        case PatternClass::p123: return map_132_123(phi(sample_dyck(n, rng)));
        case PatternClass::p321: return map_132_123(phi(sample_dyck(n, rng))).reverse();
        case PatternClass::p231: return phi(sample_dyck(n, rng)).reverse();
        case PatternClass::unrestricted: return sample_uniform(n, rng);
    }
    throw domain_error("sample_avoider: unsupported pattern");
}

// ---------------------------------------------------------------------------
// Text format: one permutation per line, space-separated, 1-based.

inline void write_permutation(std::ostream& os, const Permutation& p) { os << p.to_string() << '\n'; }

inline std::vector<Permutation> read_permutations(std::istream& is) {
    std::vector<Permutation> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        std::vector<unsigned> v;
        long x;
        while (ls >> x) {
            if (x < 1) throw domain_error("permutation entries must be positive: " + line);
            v.push_back(static_cast<unsigned>(x));
        }
        if (!ls.eof()) throw domain_error("unparsable permutation line: " + line);
        out.emplace_back(std::move(v));
    }
    return out;
}

}  // namespace permshape
