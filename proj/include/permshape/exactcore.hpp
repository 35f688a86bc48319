#pragma once

// Exact counts of 123- and 132-avoiding permutations by the value at a position.
//
// Index convention used everywhere in this library: P(n, j, k) counts
// sigma in S_n(123) with sigma(j) = k, i.e. position j holds value k. The
// matrices are transpose-symmetric so the other reading gives the same numbers.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <thread>
#include <vector>

#include "bigcount.hpp"
#include "errors.hpp"
#include "pattern_class.hpp"

namespace permshape {

// ---------------------------------------------------------------------------
// Memo tables

/// Process-wide Catalan and factorial tables. They only ever grow; readers take a
/// shared lock, the first caller past the current size extends the table.
/// Elements live in a deque so references stay valid while the table grows.
class CountTables {
public:
    static CountTables& instance() {
        static CountTables tables;
        return tables;
    }

    const BigCount& catalan(unsigned n) { return lookup(catalan_, n, &CountTables::extend_catalan); }
    const BigCount& factorial(unsigned n) { return lookup(factorial_, n, &CountTables::extend_factorial); }

    CountTables(const CountTables&) = delete;
    CountTables& operator=(const CountTables&) = delete;

private:
    CountTables() {
        catalan_.emplace_back(1);
        factorial_.emplace_back(1);
    }

    using Extender = void (CountTables::*)(unsigned);

    const BigCount& lookup(std::deque<BigCount>& table, unsigned n, Extender extend) {
        {
            std::shared_lock lock(mutex_);
            if (n < table.size()) return table[n];
        }
        std::unique_lock lock(mutex_);
        (this->*extend)(n);
        return table[n];
    }

    void extend_catalan(unsigned n) {
        // C_{m+1} = C_m * 2(2m+1) / (m+2), exact at every step.
        while (catalan_.size() <= n) {
            const unsigned m = static_cast<unsigned>(catalan_.size()) - 1;
            BigCount next = catalan_.back() * (2 * (2 * static_cast<unsigned long>(m) + 1));
            next /= (m + 2);
            catalan_.push_back(std::move(next));
        }
    }

    void extend_factorial(unsigned n) {
        while (factorial_.size() <= n) {
            const auto m = static_cast<unsigned long>(factorial_.size());
            factorial_.push_back(factorial_.back() * m);
        }
    }

    std::shared_mutex mutex_;
    std::deque<BigCount> catalan_;
    std::deque<BigCount> factorial_;
};

/// C_n = binom(2n, n) / (n + 1).
inline const BigCount& catalan(unsigned n) { return CountTables::instance().catalan(n); }

inline BigCount binomial(unsigned n, unsigned k) {
    if (k > n) return BigCount(0);
    auto& t = CountTables::instance();
    BigCount den = t.factorial(k) * t.factorial(n - k);
    return t.factorial(n) / den;
}

/// Ballot number b(n,k) = (n-k+1)/(n+k-1) * binom(n+k-1, n): lattice paths from
/// (0,0) to (n+k-2, n-k) that never go below the axis. Also the number of
/// 123-avoiders (and of 132-avoiders) of size n whose first entry is k.
inline BigCount ballot(unsigned n, unsigned k) {
    if (k < 1 || k > n)
        throw domain_error("ballot(n,k) requires 1 <= k <= n, got n=" + std::to_string(n) +
                           " k=" + std::to_string(k));
    BigCount num = binomial(n + k - 1, n) * (n - k + 1);
    BigCount rem;
    BigCount quot;
    boost::multiprecision::divide_qr(num, BigCount(n + k - 1), quot, rem);
    if (rem != 0)
        throw consistency_error("ballot(" + std::to_string(n) + "," + std::to_string(k) +
                                "): division by n+k-1 left a remainder");
    return quot;
}

namespace detail {

inline void check_cell(unsigned n, unsigned j, unsigned k) {
    if (n == 0 || j < 1 || k < 1 || j > n || k > n)
        throw domain_error("cell (" + std::to_string(j) + "," + std::to_string(k) +
                           ") is outside [1," + std::to_string(n) + "]^2");
}

inline unsigned q_r_min(unsigned n, unsigned j, unsigned k) { return j + k > n + 1 ? j + k - n - 1 : 0; }
inline unsigned q_r_max(unsigned j, unsigned k) { return std::min(j, k) - 1; }

}  // namespace detail

/// Lazily filled table of ballot numbers b(m, i) for m <= capacity. Rows are filled
/// whole on first touch; fill the rows you need before sharing across threads.
class BallotTable {
public:
    explicit BallotTable(unsigned capacity) : rows_(capacity + 1) {}

    void prefill(unsigned m) {
        auto& row = rows_.at(m);
        if (!row.empty() || m == 0) return;
        row.reserve(m);
        for (unsigned i = 1; i <= m; ++i) row.push_back(ballot(m, i));
    }

    /// Requires the row to be filled already (or fills it when called single-threaded).
    const BigCount& at(unsigned m, unsigned i) {
        prefill(m);
        return rows_[m][i - 1];
    }

    unsigned capacity() const { return static_cast<unsigned>(rows_.size()) - 1; }

private:
    std::vector<std::vector<BigCount>> rows_;
};

/// Exact P/Q cells for one fixed n, sharing a ballot table between calls.
class ExactEvaluator {
public:
    explicit ExactEvaluator(unsigned n) : n_(n), ballots_(n + 1) {}

    unsigned n() const { return n_; }

    // Touch every ballot row that P/Q cells in these index ranges will read.
    void prefill_for(unsigned j_lo, unsigned j_hi, unsigned k_lo, unsigned k_hi) {
        for (unsigned j = j_lo; j <= j_hi; ++j) {
            ballots_.prefill(n_ - j + 1);
            ballots_.prefill(j);
        }
        for (unsigned k = k_lo; k <= k_hi; ++k) {
            ballots_.prefill(n_ - k + 1);
            ballots_.prefill(k);
        }
    }

    BigCount P(unsigned j, unsigned k) {
        detail::check_cell(n_, j, k);
        if (j + k <= n_ + 1) return ballots_.at(n_ - k + 1, j) * ballots_.at(n_ - j + 1, k);
        return ballots_.at(j, n_ - k + 1) * ballots_.at(k, n_ - j + 1);
    }

    /// q_n(j,k,r): 132-avoiders with sigma(j)=k and exactly r smaller values before position j.
    BigCount q_term(unsigned j, unsigned k, unsigned r) {
        return ballots_.at(n_ - j + 1, k - r) * ballots_.at(n_ - k + 1, j - r) * catalan(r);
    }

    BigCount Q(unsigned j, unsigned k) {
        detail::check_cell(n_, j, k);
        BigCount total = 0;
        const unsigned hi = detail::q_r_max(j, k);
        for (unsigned r = detail::q_r_min(n_, j, k); r <= hi; ++r) total += q_term(j, k, r);
        return total;
    }

private:
    unsigned n_;
    BallotTable ballots_;
};

/// Number of sigma in S_n(123) with sigma(j) = k.
inline BigCount exact_P(unsigned n, unsigned j, unsigned k) {
    detail::check_cell(n, j, k);
    if (j + k <= n + 1) return ballot(n - k + 1, j) * ballot(n - j + 1, k);
    return ballot(j, n - k + 1) * ballot(k, n - j + 1);
}

struct QTerm {
    unsigned r;
    BigCount value;
};

/// The summands q_n(j,k,r) of Q_n(j,k), in increasing r.
inline std::vector<QTerm> q_terms(unsigned n, unsigned j, unsigned k) {
    detail::check_cell(n, j, k);
    std::vector<QTerm> out;
    const unsigned hi = detail::q_r_max(j, k);
    for (unsigned r = detail::q_r_min(n, j, k); r <= hi; ++r)
        out.push_back({r, ballot(n - j + 1, k - r) * ballot(n - k + 1, j - r) * catalan(r)});
    return out;
}

/// Number of sigma in S_n(132) with sigma(j) = k.
inline BigCount exact_Q(unsigned n, unsigned j, unsigned k) {
    BigCount total = 0;
    for (auto& t : q_terms(n, j, k)) total += t.value;
    return total;
}

// ---------------------------------------------------------------------------
// Normalized entries

struct NormalizedEntry {
    double log_ratio = -std::numeric_limits<double>::infinity();
    double ratio = 0.0;

    static NormalizedEntry from_log(double log_ratio) { return {log_ratio, std::exp(log_ratio)}; }
};

/// count / C_n. The log is taken from the GMP mantissa/exponent pair so it stays
/// accurate for counts of any size; ratio is exp(log_ratio).
inline NormalizedEntry normalize(const BigCount& count, unsigned n) {
    const BigCount& cn = catalan(n);
    if (count.sign() < 0 || count > cn)
        throw consistency_error("normalize: count exceeds C_" + std::to_string(n));
    if (count == cn) return {0.0, 1.0};
    return NormalizedEntry::from_log(log_ratio_big(count, cn));
}

/// Log-space evaluation of P_n(j,k)/C_n and Q_n(j,k)/C_n for large n, from a
/// table of log m! accumulated in long double.
class LogEvaluator {
public:
    explicit LogEvaluator(unsigned n) : n_(n), log_fact_(2 * static_cast<std::size_t>(n) + 2) {
        long double sum = 0.0L, comp = 0.0L;
        log_fact_[0] = 0.0L;
        for (std::size_t m = 1; m < log_fact_.size(); ++m) {
            // Kahan-compensated running sum of log m.
            const long double y = std::log(static_cast<long double>(m)) - comp;
            const long double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
            log_fact_[m] = sum;
        }
        log_cn_ = log_catalan(n);
    }

    unsigned n() const { return n_; }

    long double log_factorial(unsigned m) const { return log_fact_.at(m); }

    long double log_catalan(unsigned m) const {
        return log_fact_[2 * m] - log_fact_[m] - log_fact_[m + 1];
    }

    /// log b(m,i) for 1 <= i <= m.
    long double log_ballot(unsigned m, unsigned i) const {
        return std::log(static_cast<long double>(m - i + 1)) - std::log(static_cast<long double>(m + i - 1)) +
               log_fact_[m + i - 1] - log_fact_[m] - log_fact_[i - 1];
    }

    double log_ratio_P(unsigned j, unsigned k) const {
        detail::check_cell(n_, j, k);
        long double lp = (j + k <= n_ + 1) ? log_ballot(n_ - k + 1, j) + log_ballot(n_ - j + 1, k)
                                           : log_ballot(j, n_ - k + 1) + log_ballot(k, n_ - j + 1);
        return static_cast<double>(lp - log_cn_);
    }

    double ratio_Q(unsigned j, unsigned k) const {
        detail::check_cell(n_, j, k);
        long double sum = 0.0L, comp = 0.0L;
        const unsigned hi = detail::q_r_max(j, k);
        for (unsigned r = detail::q_r_min(n_, j, k); r <= hi; ++r) {
            const long double lt =
                log_ballot(n_ - j + 1, k - r) + log_ballot(n_ - k + 1, j - r) + log_catalan(r) - log_cn_;
            const long double y = std::exp(lt) - comp;
            const long double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        return static_cast<double>(sum);
    }

    NormalizedEntry P(unsigned j, unsigned k) const { return NormalizedEntry::from_log(log_ratio_P(j, k)); }

    NormalizedEntry Q(unsigned j, unsigned k) const {
        const double r = ratio_Q(j, k);
        return {r > 0 ? std::log(r) : -std::numeric_limits<double>::infinity(), r};
    }

private:
    unsigned n_;
    std::vector<long double> log_fact_;
    long double log_cn_ = 0.0L;
};

// ---------------------------------------------------------------------------
// Matrix slices

enum class MatrixMode { exact, normalized };

struct IndexRange {
    unsigned lo = 1;
    unsigned hi = 0;

    unsigned size() const { return hi >= lo ? hi - lo + 1 : 0; }
    bool contains(unsigned i) const { return i >= lo && i <= hi; }
};

struct MatrixSlice {
    PatternClass pattern = PatternClass::p123;
    unsigned n = 0;
    IndexRange rows;
    IndexRange cols;
    MatrixMode mode = MatrixMode::exact;
    std::vector<BigCount> exact;            // row-major, filled in exact mode
    std::vector<NormalizedEntry> normalized;  // row-major, filled in normalized mode

    std::size_t offset(unsigned j, unsigned k) const {
        if (!rows.contains(j) || !cols.contains(k))
            throw domain_error("cell (" + std::to_string(j) + "," + std::to_string(k) + ") outside slice");
        return static_cast<std::size_t>(j - rows.lo) * cols.size() + (k - cols.lo);
    }
    const BigCount& exact_at(unsigned j, unsigned k) const { return exact.at(offset(j, k)); }
    const NormalizedEntry& normalized_at(unsigned j, unsigned k) const { return normalized.at(offset(j, k)); }
};

struct SliceOptions {
    unsigned threads = 0;               // 0: hardware concurrency
    unsigned logspace_threshold = 2000;  // normalized mode switches to log-gamma above this n
};

namespace detail {

template <typename RowFn>
void for_rows(unsigned lo, unsigned hi, unsigned threads, RowFn&& fn) {
    const unsigned count = hi - lo + 1;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (unsigned j = lo; j <= hi; ++j) fn(j);
        return;
    }
    // Rows are independent; interleaved assignment balances the triangular Q cost.
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            for (unsigned j = lo + t; j <= hi; j += threads) fn(j);
        });
}

}  // namespace detail

/// Dense block of the P (pattern 123) or Q (pattern 132) matrix. n = 0 yields the
/// empty matrix; otherwise both ranges must be non-empty and inside [1,n].
inline MatrixSlice matrix_slice(PatternClass pattern, unsigned n, IndexRange rows, IndexRange cols,
                                MatrixMode mode, SliceOptions opts = {}) {
    if (pattern != PatternClass::p123 && pattern != PatternClass::p132)
        throw domain_error("matrix_slice: pattern must be 123 or 132");
    MatrixSlice out;
    out.pattern = pattern;
    out.n = n;
    out.mode = mode;
    if (n == 0) {
        out.rows = out.cols = IndexRange{1, 0};
        return out;
    }
    if (rows.size() == 0 || cols.size() == 0) throw domain_error("matrix_slice: empty row or column range");
    if (rows.lo < 1 || rows.hi > n || cols.lo < 1 || cols.hi > n)
        throw domain_error("matrix_slice: range outside [1," + std::to_string(n) + "]");
    out.rows = rows;
    out.cols = cols;
    const std::size_t cells = static_cast<std::size_t>(rows.size()) * cols.size();
    const bool is_p = pattern == PatternClass::p123;

    if (mode == MatrixMode::normalized && n > opts.logspace_threshold) {
        LogEvaluator ev(n);
        out.normalized.resize(cells);
        detail::for_rows(rows.lo, rows.hi, opts.threads, [&](unsigned j) {
            for (unsigned k = cols.lo; k <= cols.hi; ++k)
                out.normalized[out.offset(j, k)] = is_p ? ev.P(j, k) : ev.Q(j, k);
        });
        return out;
    }

    ExactEvaluator ev(n);
    ev.prefill_for(rows.lo, rows.hi, cols.lo, cols.hi);
    catalan(n);  // warm the shared table before workers read it
    out.exact.resize(cells);
    detail::for_rows(rows.lo, rows.hi, opts.threads, [&](unsigned j) {
        for (unsigned k = cols.lo; k <= cols.hi; ++k) out.exact[out.offset(j, k)] = is_p ? ev.P(j, k) : ev.Q(j, k);
    });
    if (mode == MatrixMode::normalized) {
        out.normalized.reserve(cells);
        for (const auto& c : out.exact) out.normalized.push_back(normalize(c, n));
        out.exact.clear();
    }
    return out;
}

/// The whole n x n matrix.
inline MatrixSlice full_matrix(PatternClass pattern, unsigned n, MatrixMode mode, SliceOptions opts = {}) {
    return matrix_slice(pattern, n, {1, n}, {1, n}, mode, opts);
}

// ---------------------------------------------------------------------------
// Diagonal profiles

struct ProfilePoint {
    unsigned k = 0;           // position along the diagonal, cell (k,k) or (k,n+1-k)
    BigCount exact;           // zero when the profile was evaluated in log space
    NormalizedEntry normalized;
};

struct Profile {
    PatternClass pattern = PatternClass::p123;
    unsigned n = 0;
    bool anti = false;
    bool exact = false;  // true when every point carries its exact count
    std::vector<ProfilePoint> points;
};

/// The main diagonal (k,k) or anti-diagonal (k,n+1-k) of P or Q, k = 1..n.
inline Profile diagonal_profile(PatternClass pattern, unsigned n, bool anti, SliceOptions opts = {}) {
    if (pattern != PatternClass::p123 && pattern != PatternClass::p132)
        throw domain_error("diagonal_profile: pattern must be 123 or 132");
    Profile out;
    out.pattern = pattern;
    out.n = n;
    out.anti = anti;
    out.exact = n <= opts.logspace_threshold;
    out.points.resize(n);
    const bool is_p = pattern == PatternClass::p123;
    auto col = [&](unsigned k) { return anti ? n + 1 - k : k; };
    if (n == 0) return out;
    if (out.exact) {
        ExactEvaluator ev(n);
        ev.prefill_for(1, n, 1, n);
        catalan(n);
        detail::for_rows(1, n, opts.threads, [&](unsigned k) {
            auto& pt = out.points[k - 1];
            pt.k = k;
            pt.exact = is_p ? ev.P(k, col(k)) : ev.Q(k, col(k));
            pt.normalized = normalize(pt.exact, n);
        });
    } else {
        LogEvaluator ev(n);
        detail::for_rows(1, n, opts.threads, [&](unsigned k) {
            auto& pt = out.points[k - 1];
            pt.k = k;
            pt.normalized = is_p ? ev.P(k, col(k)) : ev.Q(k, col(k));
        });
    }
    return out;
}

namespace detail {

inline bool profile_less(const Profile& p, std::size_t a, std::size_t b) {
    if (p.exact) return p.points[a].exact < p.points[b].exact;
    return p.points[a].normalized.log_ratio < p.points[b].normalized.log_ratio;
}

}  // namespace detail

/// Position of the largest entry; ties resolve to the smallest k.
inline unsigned profile_argmax(const Profile& p) {
    if (p.points.empty()) throw domain_error("profile_argmax: empty profile");
    std::size_t best = 0;
    for (std::size_t i = 1; i < p.points.size(); ++i)
        if (detail::profile_less(p, best, i)) best = i;
    return p.points[best].k;
}

/// Highest strict interior local maximum (2 <= k <= n-1). For the Q diagonal the
/// global maximum is the corner spike Q_n(n,n) = C_{n-1}; this finds the top of
/// the wall instead. Returns 0 when no interior local maximum exists.
inline unsigned interior_peak(const Profile& p) {
    const std::size_t m = p.points.size();
    std::size_t best = m;
    for (std::size_t i = 1; i + 1 < m; ++i) {
        if (!detail::profile_less(p, i - 1, i) || !detail::profile_less(p, i + 1, i)) continue;
        if (best == m || detail::profile_less(p, best, i)) best = i;
    }
    return best == m ? 0 : p.points[best].k;
}

}  // namespace permshape
