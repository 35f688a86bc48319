#pragma once

// Expectations of statistics over uniform pattern classes: exact (bignum rationals
// or log-space sums over the exact matrices) and Monte Carlo, plus log-log slope fits.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "asymptotics.hpp"
#include "bigcount.hpp"
#include "bijections.hpp"
#include "errors.hpp"
#include "exactcore.hpp"
#include "pattern_class.hpp"
#include "permkit.hpp"

namespace permshape {

enum class Method { exact, logspace, mc };

inline std::string name(Method m) {
    switch (m) {
        case Method::exact: return "exact";
        case Method::logspace: return "logspace";
        case Method::mc: return "mc";
    }
    return "?";
}

struct ExpectationReport {
    StatKind stat = StatKind::fp;
    double lambda = 1.0;  // only meaningful for rank
    PatternClass pattern = PatternClass::p123;
    unsigned n = 0;
    Method method = Method::exact;
    std::optional<Rational> exact;  // set in exact mode
    double value = 0.0;
    double stderr_ = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;

    std::string stat_label() const {
        if (stat != StatKind::rank) return name(stat);
        std::ostringstream os;
        os << "rank(" << lambda << ")";
        return os.str();
    }

    /// `stat class n method value stderr seed`; stderr and seed are empty fields in
    /// exact and logspace mode, and the method reads mc:SAMPLES for Monte Carlo.
    std::string serialize() const {
        std::ostringstream os;
        os << stat_label() << ' ' << name(pattern) << ' ' << n << ' ';
        if (method == Method::mc) os << "mc:" << samples;
        else os << name(method);
        os << ' ';
        if (exact) os << to_string(*exact);
        else os << std::setprecision(12) << value;
        os << ' ';
        if (method == Method::mc) os << std::setprecision(6) << stderr_ << ' ' << seed;
        else os << ' ';
        return os.str();
    }
};

// ---------------------------------------------------------------------------
// Cells of each class in terms of P and Q
//
// A uniform element of S_n(321) is the reverse of one of S_n(123), and S_n(231)
// likewise of S_n(132), so #{sigma(j)=k} is P_n(n+1-j,k) or Q_n(n+1-j,k).

namespace detail {

class ExactCells {
public:
    ExactCells(PatternClass c, unsigned n) : c_(c), n_(n), ev_(n) {
        if (c != PatternClass::unrestricted) ev_.prefill_for(1, n, 1, n);
        total_ = c == PatternClass::unrestricted ? CountTables::instance().factorial(n) : catalan(n);
        if (c == PatternClass::unrestricted && n > 0) cell_u_ = CountTables::instance().factorial(n - 1);
    }

    const BigCount& total() const { return total_; }

    BigCount operator()(unsigned j, unsigned k) {
        switch (c_) {
            case PatternClass::p123: return ev_.P(j, k);
            case PatternClass::p132: return ev_.Q(j, k);
            case PatternClass::p321: return ev_.P(n_ + 1 - j, k);
            case PatternClass::p231: return ev_.Q(n_ + 1 - j, k);
            case PatternClass::unrestricted: return cell_u_;
        }
        return 0;
    }

private:
    PatternClass c_;
    unsigned n_;
    ExactEvaluator ev_;
    BigCount total_;
    BigCount cell_u_;
};

class LogCells {
public:
    LogCells(PatternClass c, unsigned n) : c_(c), n_(n), ev_(n) {}

    /// count / |class|
    double operator()(unsigned j, unsigned k) const {
        switch (c_) {
            case PatternClass::p123: return std::exp(ev_.log_ratio_P(j, k));
            case PatternClass::p132: return ev_.ratio_Q(j, k);
            case PatternClass::p321: return std::exp(ev_.log_ratio_P(n_ + 1 - j, k));
            case PatternClass::p231: return ev_.ratio_Q(n_ + 1 - j, k);
            case PatternClass::unrestricted: return 1.0 / n_;
        }
        return 0.0;
    }

private:
    PatternClass c_;
    unsigned n_;
    LogEvaluator ev_;
};

/// Pairwise (tree) summation; the reduction order depends only on the length.
inline double pairwise_sum(const double* p, std::size_t len) {
    if (len <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < len; ++i) s += p[i];
        return s;
    }
    const std::size_t h = len / 2;
    return pairwise_sum(p, h) + pairwise_sum(p + h, len - h);
}

inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

inline ExpectationReport exact_report(StatKind s, PatternClass c, unsigned n, const BigCount& num,
                                      const BigCount& den) {
    ExpectationReport r;
    r.stat = s;
    r.pattern = c;
    r.n = n;
    r.method = Method::exact;
    r.exact = Rational(num, den);
    r.value = to_double(*r.exact);
    return r;
}

inline ExpectationReport log_report(StatKind s, PatternClass c, unsigned n, double value) {
    ExpectationReport r;
    r.stat = s;
    r.pattern = c;
    r.n = n;
    r.method = Method::logspace;
    r.value = value;
    return r;
}

}  // namespace detail

struct ExactLimits {
    unsigned bignum_max_n = 500;
    unsigned logspace_max_n = 5000;
    unsigned threads = 1;
};

/// Expected number of cells (k, col(k)) hit, for col(k) = k (fixed points) or
/// n+1-k (anti-fixed points).
inline ExpectationReport exp_diagonal_exact(StatKind stat, unsigned n, PatternClass c, ExactLimits lim = {}) {
    if (n == 0) throw domain_error("expectations need n >= 1");
    const bool anti = stat == StatKind::afp;
    auto col = [&](unsigned k) { return anti ? n + 1 - k : k; };
    if (n <= lim.bignum_max_n) {
        detail::ExactCells cells(c, n);
        std::vector<BigCount> terms(n);
        detail::for_rows(1, n, lim.threads, [&](unsigned k) { terms[k - 1] = cells(k, col(k)); });
        BigCount sum = 0;
        for (const auto& t : terms) sum += t;
        return detail::exact_report(stat, c, n, sum, cells.total());
    }
    if (n > lim.logspace_max_n)
        throw domain_error("exact expectation refused: n=" + std::to_string(n) + " exceeds the bound " +
                           std::to_string(lim.logspace_max_n));
    detail::LogCells cells(c, n);
    std::vector<double> terms(n);
    detail::for_rows(1, n, lim.threads, [&](unsigned k) { terms[k - 1] = cells(k, col(k)); });
    return detail::log_report(stat, c, n, detail::pairwise_sum(terms));
}

/// E[fp] over S_n(class). 123: sum_k P(k,k)/C_n; 132: sum_k Q(k,k)/C_n;
/// 321: sum_k P(k,n+1-k)/C_n; 231: sum_k Q(k,n+1-k)/C_n.
inline ExpectationReport exp_fp_exact(unsigned n, PatternClass c, ExactLimits lim = {}) {
    return exp_diagonal_exact(StatKind::fp, n, c, lim);
}

/// Exact distribution of the first (or last) value: weights w_k with sum = |class|.
inline std::vector<BigCount> position_weights(unsigned n, PatternClass c, bool last) {
    if (n == 0) throw domain_error("position_weights requires n >= 1");
    // Reversal swaps first and last and maps 321 -> 123, 231 -> 132.
    if (c == PatternClass::p321) return position_weights(n, PatternClass::p123, !last);
    if (c == PatternClass::p231) return position_weights(n, PatternClass::p132, !last);
    std::vector<BigCount> w(n);
    for (unsigned k = 1; k <= n; ++k) {
        switch (c) {
            case PatternClass::p123: w[k - 1] = last ? ballot(n, n + 1 - k) : ballot(n, k); break;
            case PatternClass::p132: w[k - 1] = last ? catalan(k - 1) * catalan(n - k) : ballot(n, k); break;
            default: w[k - 1] = CountTables::instance().factorial(n - 1); break;
        }
    }
    return w;
}

/// E[sigma(1)] or E[sigma(n)] as an exact rational.
inline ExpectationReport exp_position_exact(unsigned n, PatternClass c, bool last) {
    const auto w = position_weights(n, c, last);
    BigCount num = 0, den = 0;
    for (unsigned k = 1; k <= n; ++k) {
        num += w[k - 1] * k;
        den += w[k - 1];
    }
    return detail::exact_report(last ? StatKind::last : StatKind::first, c, n, num, den);
}

enum class PositionQuery { first_123, first_132, last_132 };

inline ExpectationReport exp_position_exact(unsigned n, PositionQuery q) {
    switch (q) {
        case PositionQuery::first_123: return exp_position_exact(n, PatternClass::p123, false);
        case PositionQuery::first_132: return exp_position_exact(n, PatternClass::p132, false);
        case PositionQuery::last_132: return exp_position_exact(n, PatternClass::p132, true);
    }
    throw domain_error("exp_position_exact: unknown query");
}

/// The per-cell chi2 contribution min{(n+1-k-j)^2, (2n-k-j)^2} for sigma(j) = k.
inline std::int64_t chi2_cell(unsigned n, unsigned j, unsigned k) {
    const std::int64_t a = static_cast<std::int64_t>(n) + 1 - k - j;
    const std::int64_t b = 2 * static_cast<std::int64_t>(n) - k - j;
    return std::min(a * a, b * b);
}

/// E[chi2] = sum_{j,k} chi2_cell(j,k) * cell(j,k) / |class|. The bignum path is O(n^2)
/// cells; Q cells cost O(n) each, so the 132/231 classes are refused above 400.
inline ExpectationReport exp_chi2_exact(unsigned n, PatternClass c, ExactLimits lim = {}) {
    if (n == 0) throw domain_error("expectations need n >= 1");
    const bool q_class = c == PatternClass::p132 || c == PatternClass::p231;
    if (q_class && n > 400) throw domain_error("exact chi2 for this class refused above n=400; use --mc");
    if (c == PatternClass::unrestricted) {
        BigCount num = 0;
        for (unsigned j = 1; j <= n; ++j)
            for (unsigned k = 1; k <= n; ++k) num += chi2_cell(n, j, k);
        return detail::exact_report(StatKind::chi2, c, n, num, BigCount(n));
    }
    if (n <= std::min(lim.bignum_max_n, 200u)) {
        detail::ExactCells cells(c, n);
        std::vector<BigCount> rows(n);
        detail::for_rows(1, n, lim.threads, [&](unsigned j) {
            BigCount s = 0;
            for (unsigned k = 1; k <= n; ++k) s += cells(j, k) * chi2_cell(n, j, k);
            rows[j - 1] = std::move(s);
        });
        BigCount num = 0;
        for (const auto& r : rows) num += r;
        return detail::exact_report(StatKind::chi2, c, n, num, cells.total());
    }
    if (n > lim.logspace_max_n) throw domain_error("exact chi2 refused above n=" + std::to_string(lim.logspace_max_n));
    detail::LogCells cells(c, n);
    std::vector<double> rows(n);
    detail::for_rows(1, n, lim.threads, [&](unsigned j) {
        std::vector<double> t(n);
        for (unsigned k = 1; k <= n; ++k) t[k - 1] = cells(j, k) * static_cast<double>(chi2_cell(n, j, k));
        rows[j - 1] = detail::pairwise_sum(t);
    });
    return detail::log_report(StatKind::chi2, c, n, detail::pairwise_sum(rows));
}

/// Exact expectation of any statistic by averaging over the enumerated class (n <= 12).
inline ExpectationReport exp_by_enumeration(StatKind s, PatternClass c, unsigned n, double lambda = 1.0) {
    const auto all = enumerate_class(n, c);
    BigCount num = 0;
    for (const auto& p : all) num += BigCount(stat(p, s, lambda).value);
    auto r = detail::exact_report(s, c, n, num, BigCount(all.size()));
    r.lambda = lambda;
    return r;
}

// ---------------------------------------------------------------------------
// Monte Carlo

inline constexpr std::uint64_t mc_shard_size = 4096;

struct McOptions {
    double lambda = 1.0;
    unsigned threads = 1;
};

namespace detail {

struct ShardSum {
    long double sum = 0;
    long double sumsq = 0;
    std::uint64_t count = 0;
};

}  // namespace detail

/// Runs `fn(sample, shard_index)` for `samples` uniform draws. Shard s draws from
/// SeededRng::stream(seed, s) and holds mc_shard_size samples (the last may be
/// shorter), so the draws depend only on (seed, samples), never on threading.
template <typename Fn>
void mc_for_each(PatternClass c, unsigned n, std::uint64_t samples, std::uint64_t seed, unsigned threads, Fn&& fn) {
    const std::uint64_t shards = (samples + mc_shard_size - 1) / mc_shard_size;
    if (shards == 0) return;
    detail::for_rows(0, static_cast<unsigned>(shards - 1), threads, [&](unsigned s) {
        auto rng = SeededRng::stream(seed, s);
        const std::uint64_t begin = s * mc_shard_size;
        const std::uint64_t end = std::min(samples, begin + mc_shard_size);
        for (std::uint64_t i = begin; i < end; ++i) fn(sample_avoider(n, c, rng), i);
    });
}

/// All statistic values of a Monte Carlo run, in sample order.
inline std::vector<std::int64_t> mc_values(StatKind kind, PatternClass c, unsigned n, std::uint64_t samples,
                                           std::uint64_t seed, McOptions opt = {}) {
    std::vector<std::int64_t> out(samples);
    mc_for_each(c, n, samples, seed, opt.threads,
                [&](const Permutation& p, std::uint64_t i) { out[i] = stat(p, kind, opt.lambda).value; });
    return out;
}

/// Sample mean with standard error (sample stdev / sqrt(samples)).
inline ExpectationReport mc_expectation(StatKind kind, PatternClass c, unsigned n, std::uint64_t samples,
                                        std::uint64_t seed, McOptions opt = {}) {
    if (n == 0 || samples < 2) throw domain_error("mc_expectation needs n >= 1 and at least 2 samples");
    const std::uint64_t shards = (samples + mc_shard_size - 1) / mc_shard_size;
    std::vector<detail::ShardSum> sums(shards);
    mc_for_each(c, n, samples, seed, opt.threads, [&](const Permutation& p, std::uint64_t i) {
        const auto v = static_cast<long double>(stat(p, kind, opt.lambda).value);
        auto& s = sums[i / mc_shard_size];
        s.sum += v;
        s.sumsq += v * v;
        ++s.count;
    });
    long double sum = 0, sumsq = 0;
    for (const auto& s : sums) {
        sum += s.sum;
        sumsq += s.sumsq;
    }
    const long double m = sum / samples;
    const long double var = std::max<long double>(0, (sumsq - samples * m * m) / (samples - 1));
    ExpectationReport r;
    r.stat = kind;
    r.lambda = opt.lambda;
    r.pattern = c;
    r.n = n;
    r.method = Method::mc;
    r.value = static_cast<double>(m);
    r.stderr_ = static_cast<double>(std::sqrt(var / samples));
    r.samples = samples;
    r.seed = seed;
    return r;
}

// ---------------------------------------------------------------------------
// Slopes and extrapolation

struct SlopeFit {
    std::vector<double> n_schedule;
    std::vector<double> values;
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // root mean square of the fit residuals
};

/// Least-squares line through (x_i, y_i).
inline SlopeFit linear_fit(std::vector<double> xs, std::vector<double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw domain_error("linear_fit needs matching inputs, size >= 2");
    const double m = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / m;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / m;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0) throw domain_error("linear_fit: x values are all equal");
    SlopeFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double rss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (f.intercept + f.slope * xs[i]);
        rss += e * e;
    }
    f.residual = std::sqrt(rss / m);
    f.n_schedule = std::move(xs);
    f.values = std::move(ys);
    return f;
}

/// Slope of log(value) against log(n).
inline SlopeFit slope_probe(const std::vector<double>& ns, const std::vector<double>& values) {
    if (ns.size() != values.size() || ns.size() < 3) throw domain_error("slope_probe needs >= 3 matching points");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (!(values[i] > 0) || !(ns[i] > 0))
            throw domain_error("slope_probe: nonpositive value at n=" + std::to_string(ns[i]));
        lx.push_back(std::log(ns[i]));
        ly.push_back(std::log(values[i]));
    }
    auto f = linear_fit(lx, ly);
    f.n_schedule = ns;
    f.values = values;
    return f;
}

inline SlopeFit slope_probe(const std::vector<unsigned>& ns, const std::function<double(unsigned)>& quantity) {
    std::vector<double> xs, ys;
    for (unsigned n : ns) {
        xs.push_back(n);
        ys.push_back(quantity(n));
    }
    return slope_probe(xs, ys);
}

struct Extrapolation {
    double limit = 0.0;
    double ratio = 0.0;  // successive-difference ratio, 2^{-p} for an n^{-p} correction on a doubling schedule
    double order = 0.0;  // p
};

/// Aitken-style extrapolation from the last three values of a sequence whose
/// correction term shrinks geometrically along the schedule.
inline Extrapolation extrapolate_geometric(const std::vector<double>& v) {
    if (v.size() < 3) throw domain_error("extrapolation needs at least three values");
    const std::size_t m = v.size();
    const double d1 = v[m - 2] - v[m - 3];
    const double d2 = v[m - 1] - v[m - 2];
    if (d1 == 0) return {v[m - 1], 0.0, std::numeric_limits<double>::infinity()};
    const double rho = d2 / d1;
    if (!(rho > 0 && rho < 1)) throw consistency_error("extrapolation: differences do not shrink geometrically");
    return {v[m - 1] + d2 * rho / (1 - rho), rho, -std::log2(rho)};
}

// ---------------------------------------------------------------------------
// Regime probes

enum class Theorem { F, G };

inline Theorem parse_theorem(const std::string& s) {
    if (s == "F" || s == "f" || s == "P") return Theorem::F;
    if (s == "G" || s == "g" || s == "Q") return Theorem::G;
    throw domain_error("theorem must be F or G, got '" + s + "'");
}

inline RegimeResult classify(Theorem t, const RegimeQuery& q) { return t == Theorem::F ? regime_F(q) : regime_G(q); }

/// log(count / C_n) at the query's cell for size n (P for F, Q for G).
inline double regime_log_ratio(Theorem t, const RegimeQuery& q, unsigned n, bool offset) {
    const auto [j, k] = regime_cell(q, n, offset);
    if (j < 1 || k < 1 || j > static_cast<long>(n) || k > static_cast<long>(n))
        throw domain_error("query cell (" + std::to_string(j) + "," + std::to_string(k) + ") is outside [1," +
                           std::to_string(n) + "]");
    LogEvaluator ev(n);
    if (t == Theorem::F) return ev.log_ratio_P(static_cast<unsigned>(j), static_cast<unsigned>(k));
    const double r = ev.ratio_Q(static_cast<unsigned>(j), static_cast<unsigned>(k));
    return r > 0 ? std::log(r) : -std::numeric_limits<double>::infinity();
}

/// Fitted exponent: minus the slope of log(count/C_n) against log n.
inline SlopeFit regime_slope(Theorem t, const RegimeQuery& q, const std::vector<unsigned>& ns) {
    const bool offset = classify(t, q).offset;
    std::vector<double> xs, ys;
    for (unsigned n : ns) {
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(-regime_log_ratio(t, q, n, offset));
    }
    auto f = linear_fit(xs, ys);
    f.n_schedule.assign(ns.begin(), ns.end());
    return f;
}

/// Slope of log(count/C_n) against n itself, for exponentially decaying cells.
inline SlopeFit decay_slope(Theorem t, const RegimeQuery& q, const std::vector<unsigned>& ns) {
    std::vector<double> xs, ys;
    for (unsigned n : ns) {
        xs.push_back(n);
        ys.push_back(regime_log_ratio(t, q, n, false));
    }
    return linear_fit(xs, ys);
}

// ---------------------------------------------------------------------------
// Goodness of fit helpers

/// Kolmogorov-Smirnov distance between the empirical distribution of `xs` and a
/// continuous CDF, checked on both sides of every jump.
inline double ks_distance(std::vector<double> xs, const std::function<double(double)>& cdf) {
    if (xs.empty()) throw domain_error("ks_distance: no samples");
    std::sort(xs.begin(), xs.end());
    const double m = static_cast<double>(xs.size());
    double d = 0;
    for (std::size_t i = 0; i < xs.size();) {
        std::size_t j = i;
        while (j < xs.size() && xs[j] == xs[i]) ++j;
        const double f = cdf(xs[i]);
        d = std::max({d, std::abs(f - static_cast<double>(i) / m), std::abs(f - static_cast<double>(j) / m)});
        i = j;
    }
    return d;
}

struct GofResult {
    double statistic = 0.0;
    unsigned dof = 0;
    double p_value = 1.0;
};

/// Pearson chi-square goodness of fit of observed counts against cell probabilities.
inline GofResult chi2_gof(const std::vector<std::uint64_t>& observed, const std::vector<double>& probs) {
    if (observed.size() != probs.size() || observed.size() < 2) throw domain_error("chi2_gof: need >= 2 matching cells");
    double total = 0;
    for (auto o : observed) total += static_cast<double>(o);
    GofResult g;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double e = total * probs[i];
        if (!(e > 0)) throw domain_error("chi2_gof: cell with zero expectation");
        const double d = static_cast<double>(observed[i]) - e;
        g.statistic += d * d / e;
    }
    g.dof = static_cast<unsigned>(observed.size() - 1);
    g.p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared(g.dof), g.statistic));
    return g;
}

/// Limit law of (lis - n/2)/sqrt(n) over S_n(321): P(X <= t) = gamma_p(3/2, 4t^2) for t >= 0.
inline double lis_limit_cdf(double t) { return t <= 0 ? 0.0 : boost::math::gamma_p(1.5, 4 * t * t); }

}  // namespace permshape
