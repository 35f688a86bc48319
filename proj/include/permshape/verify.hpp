#pragma once

// Self-check suites behind `permshape verify`. Each check prints one PASS/FAIL line.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "asymptotics.hpp"
#include "bijections.hpp"
#include "exactcore.hpp"
#include "permkit.hpp"
#include "statlab.hpp"

namespace permshape::verify {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Check {
    std::string name;
    std::function<Outcome()> run;
};

class Runner {
public:
    explicit Runner(std::ostream& os) : os_(os) {}

    void run(const Check& c) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        os_ << (o.pass ? "PASS " : "FAIL ") << c.name;
        if (!o.detail.empty()) os_ << "  " << o.detail;
        os_ << '\n';
        os_.flush();
        (o.pass ? passed_ : failed_)++;
    }

    unsigned passed() const { return passed_; }
    unsigned failed() const { return failed_; }

private:
    std::ostream& os_;
    unsigned passed_ = 0;
    unsigned failed_ = 0;
};

namespace detail {

inline std::string fmt(double v, int prec = 6) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

template <typename T>
std::map<T, unsigned> multiset(const std::vector<T>& v) {
    std::map<T, unsigned> m;
    for (const auto& x : v) ++m[x];
    return m;
}

// Cell counts by brute force over an enumerated class.
inline std::vector<std::vector<unsigned long>> brute_cells(unsigned n, PatternClass c) {
    std::vector<std::vector<unsigned long>> m(n + 1, std::vector<unsigned long>(n + 1, 0));
    for (const auto& p : enumerate_class(n, c))
        for (unsigned j = 1; j <= n; ++j) ++m[j][p(j)];
    return m;
}

inline bool naive_contains3(const Permutation& s, const Pattern& pat) {
    const auto& q = pat.perm();
    for (unsigned a = 1; a <= s.size(); ++a)
        for (unsigned b = a + 1; b <= s.size(); ++b)
            for (unsigned c = b + 1; c <= s.size(); ++c)
                if ((s(a) < s(b)) == (q(1) < q(2)) && (s(b) < s(c)) == (q(2) < q(3)) &&
                    (s(a) < s(c)) == (q(1) < q(3)))
                    return true;
    return false;
}

}  // namespace detail

inline std::vector<Check> oracle_checks(unsigned max_n) {
    using detail::fmt;
    std::vector<Check> out;
    const unsigned small = std::min(max_n, 8u);

    out.push_back({"class sizes are Catalan for all six patterns, n <= " + std::to_string(max_n), [=] {
        for (const auto& pat : Pattern::all_of_length3())
            for (unsigned n = 1; n <= max_n; ++n)
                if (BigCount(enumerate_avoiders(n, pat).size()) != catalan(n))
                    return Outcome{false, "pattern " + pat.name() + " n=" + std::to_string(n)};
        return Outcome{true, ""};
    }});

    out.push_back({"exact_P and exact_Q equal brute-force cell counts, n <= " + std::to_string(max_n), [=] {
        for (unsigned n = 1; n <= max_n; ++n) {
            const auto bp = detail::brute_cells(n, PatternClass::p123);
            const auto bq = detail::brute_cells(n, PatternClass::p132);
            for (unsigned j = 1; j <= n; ++j)
                for (unsigned k = 1; k <= n; ++k)
                    if (exact_P(n, j, k) != bp[j][k] || exact_Q(n, j, k) != bq[j][k])
                        return Outcome{false, "n=" + std::to_string(n) + " cell (" + std::to_string(j) + "," +
                                                  std::to_string(k) + ")"};
        }
        return Outcome{true, ""};
    }});

    out.push_back({"worked examples P_7(4,3)=70, Q_7(4,3)=70+27+8=105", [] {
        const auto t = q_terms(7, 4, 3);
        const bool ok = exact_P(7, 4, 3) == 70 && exact_Q(7, 4, 3) == 105 && t.size() == 3 && t[0].value == 70 &&
                        t[1].value == 27 && t[2].value == 8 && ballot(5, 4) == 14 && ballot(4, 3) == 5;
        return Outcome{ok, ""};
    }});

    out.push_back({"length-3 containment matches the triple loop, n <= " + std::to_string(small), [=] {
        for (unsigned n = 1; n <= small; ++n)
            for (const auto& s : enumerate_class(n, PatternClass::unrestricted))
                for (const auto& pat : Pattern::all_of_length3())
                    if (contains(s, pat) != detail::naive_contains3(s, pat))
                        return Outcome{false, s.to_string() + " vs " + pat.name()};
        return Outcome{true, ""};
    }});

    out.push_back({"phi maps D_n onto S_n(132) and phi_inv inverts it, n <= " + std::to_string(small), [=] {
        for (unsigned n = 1; n <= small; ++n) {
            std::vector<Permutation> img;
            for (const auto& g : enumerate_dyck(n)) {
                auto t = phi(g);
                if (phi_inv(t) != g) return Outcome{false, "round trip fails at " + g.to_string()};
                img.push_back(t);
            }
            std::sort(img.begin(), img.end());
            if (img != enumerate_avoiders(n, Pattern::of(PatternClass::p132)))
                return Outcome{false, "image differs at n=" + std::to_string(n)};
        }
        return Outcome{phi(DyckPath::parse("uuduuddudd")) == Permutation{4, 2, 3, 1, 5}, "uuduuddudd -> 4 2 3 1 5"};
    }});

    out.push_back({"Simion-Schmidt is a bijection fixing left-to-right minima, n <= " + std::to_string(small), [=] {
        for (unsigned n = 1; n <= small; ++n) {
            std::vector<Permutation> img;
            for (const auto& s : enumerate_avoiders(n, Pattern::of(PatternClass::p123))) {
                auto t = map_123_132(s);
                const auto m1 = left_to_right_minima(s), m2 = left_to_right_minima(t);
                if (m1 != m2) return Outcome{false, "minima moved for " + s.to_string()};
                for (unsigned p : m1)
                    if (s(p) != t(p)) return Outcome{false, "minimum value changed for " + s.to_string()};
                if (map_132_123(t) != s) return Outcome{false, "inverse fails for " + s.to_string()};
                img.push_back(t);
            }
            std::sort(img.begin(), img.end());
            if (img != enumerate_avoiders(n, Pattern::of(PatternClass::p132)))
                return Outcome{false, "image differs at n=" + std::to_string(n)};
        }
        return Outcome{true, ""};
    }});

    out.push_back({"reversal maps S_n(123) onto S_n(321) and S_n(132) onto S_n(231), n <= " + std::to_string(small),
                   [=] {
                       for (unsigned n = 1; n <= small; ++n) {
                           for (auto [from, to] : {std::pair{PatternClass::p123, PatternClass::p321},
                                                   std::pair{PatternClass::p132, PatternClass::p231}}) {
                               std::vector<Permutation> img;
                               for (const auto& s : enumerate_class(n, from)) img.push_back(s.reverse());
                               std::sort(img.begin(), img.end());
                               if (img != enumerate_class(n, to))
                                   return Outcome{false, "n=" + std::to_string(n)};
                           }
                       }
                       return Outcome{true, ""};
                   }});

    out.push_back({"afp over S_n(123) equidistributed with fp over S_n(321), n <= " + std::to_string(small), [=] {
        for (unsigned n = 1; n <= small; ++n) {
            std::vector<unsigned> a, b;
            for (const auto& s : enumerate_class(n, PatternClass::p123)) a.push_back(anti_fixed_points(s));
            for (const auto& s : enumerate_class(n, PatternClass::p321)) b.push_back(fixed_points(s));
            if (detail::multiset(a) != detail::multiset(b)) return Outcome{false, "n=" + std::to_string(n)};
        }
        return Outcome{true, ""};
    }});

    out.push_back({"123-avoiders have at most 2 fixed points, n <= " + std::to_string(max_n), [=] {
        for (unsigned n = 1; n <= max_n; ++n)
            for (const auto& s : enumerate_class(n, PatternClass::p123))
                if (fixed_points(s) > 2) return Outcome{false, s.to_string()};
        return Outcome{true, ""};
    }});

    // Every sigma(i), i <= r, lies in (lambda r, n], so r <= n - floor(lambda r). For lambda = 1
    // this is r <= n/2; for lambda < 1 the cruder n/(1+lambda) fails (sigma = 1, lambda = 1/2).
    out.push_back({"rank_lambda + floor(lambda rank_lambda) <= n on all of S_n, lambda in {0.5, 1}, n <= " +
                       std::to_string(small),
                   [=] {
                       for (unsigned n = 1; n <= small; ++n)
                           for (const auto& s : enumerate_class(n, PatternClass::unrestricted))
                               for (double lam : {0.5, 1.0}) {
                                   const unsigned r = rank_lambda(s, lam);
                                   if (r + std::floor(lam * r) > n || (lam == 1.0 && 2 * r > n))
                                       return Outcome{false, s.to_string() + " lambda=" + fmt(lam)};
                               }
                       return Outcome{true, ""};
                   }});

    out.push_back({"ldr, ldr', rmax, n+1-first and Dyck returns are equidistributed, n <= " + std::to_string(small),
                   [=] {
                       for (unsigned n = 1; n <= small; ++n) {
                           std::vector<unsigned> ldr123, ldr132, rmax132, first123, ret;
                           for (const auto& s : enumerate_class(n, PatternClass::p123)) {
                               ldr123.push_back(leftmost_decreasing_run(s));
                               first123.push_back(n + 1 - s(1));
                           }
                           for (const auto& s : enumerate_class(n, PatternClass::p132)) {
                               ldr132.push_back(leftmost_decreasing_run(s));
                               rmax132.push_back(right_to_left_maxima(s));
                           }
                           for (const auto& g : enumerate_dyck(n)) ret.push_back(g.returns());
                           const auto m = detail::multiset(ldr123);
                           if (m != detail::multiset(ldr132) || m != detail::multiset(rmax132) ||
                               m != detail::multiset(first123) || m != detail::multiset(ret))
                               return Outcome{false, "n=" + std::to_string(n)};
                       }
                       return Outcome{true, ""};
                   }});

    out.push_back({"patience LIS equals the quadratic DP on 2000 random permutations", [] {
        SeededRng rng(20240601);
        for (int t = 0; t < 2000; ++t) {
            const unsigned n = 1 + static_cast<unsigned>(rng.below(64));
            const auto s = sample_uniform(n, rng);
            std::vector<unsigned> best(n, 1);
            unsigned dp = 0;
            for (unsigned i = 0; i < n; ++i) {
                for (unsigned j = 0; j < i; ++j)
                    if (s.values()[j] < s.values()[i]) best[i] = std::max(best[i], best[j] + 1);
                dp = std::max(dp, best[i]);
            }
            if (dp != longest_increasing_subsequence(s)) return Outcome{false, s.to_string()};
        }
        return Outcome{true, ""};
    }});

    out.push_back({"samplers are uniform on n=3 (10^5 draws per class, chi-square)", [] {
        double worst = 1.0;
        for (auto c : {PatternClass::p123, PatternClass::p132, PatternClass::p321, PatternClass::p231}) {
            const auto all = enumerate_class(3, c);
            std::map<Permutation, std::uint64_t> counts;
            for (const auto& p : all) counts[p] = 0;
            mc_for_each(c, 3, 100000, 99, 1, [&](const Permutation& p, std::uint64_t) { ++counts.at(p); });
            std::vector<std::uint64_t> obs;
            for (auto& [p, k] : counts) obs.push_back(k);
            worst = std::min(worst, chi2_gof(obs, std::vector<double>(obs.size(), 1.0 / obs.size())).p_value);
        }
        return Outcome{worst > 0.01 / 4, "min p-value " + fmt(worst)};
    }});
    return out;
}

inline std::vector<Check> symmetry_checks(unsigned max_n) {
    std::vector<Check> out;
    const std::string upto = ", n <= " + std::to_string(max_n);

    out.push_back({"row and column sums equal C_n" + upto, [=] {
        for (unsigned n = 1; n <= max_n; ++n) {
            for (auto pat : {PatternClass::p123, PatternClass::p132}) {
                const auto m = full_matrix(pat, n, MatrixMode::exact);
                for (unsigned i = 1; i <= n; ++i) {
                    BigCount r = 0, c = 0;
                    for (unsigned t = 1; t <= n; ++t) {
                        r += m.exact_at(i, t);
                        c += m.exact_at(t, i);
                    }
                    if (r != catalan(n) || c != catalan(n))
                        return Outcome{false, std::string(name(pat)) + " n=" + std::to_string(n) + " index " + std::to_string(i)};
                }
            }
        }
        return Outcome{true, ""};
    }});

    out.push_back({"transpose symmetry of P and Q, anti-transpose symmetry of P" + upto, [=] {
        for (unsigned n = 1; n <= max_n; ++n) {
            const auto p = full_matrix(PatternClass::p123, n, MatrixMode::exact);
            const auto q = full_matrix(PatternClass::p132, n, MatrixMode::exact);
            for (unsigned j = 1; j <= n; ++j)
                for (unsigned k = 1; k <= n; ++k)
                    if (p.exact_at(j, k) != p.exact_at(k, j) || q.exact_at(j, k) != q.exact_at(k, j) ||
                        p.exact_at(j, k) != p.exact_at(n + 1 - k, n + 1 - j))
                        return Outcome{false, "n=" + std::to_string(n)};
        }
        return Outcome{true, ""};
    }});

    out.push_back({"Q is not anti-transpose symmetric: Q_3(1,2)=2, Q_3(2,3)=1", [] {
        return Outcome{exact_Q(3, 1, 2) == 2 && exact_Q(3, 2, 3) == 1, ""};
    }});

    out.push_back({"anti-diagonal sum of P equals C_n" + upto, [=] {
        for (unsigned n = 1; n <= max_n; ++n) {
            BigCount s = 0;
            for (unsigned k = 1; k <= n; ++k) s += exact_P(n, k, n + 1 - k);
            if (s != catalan(n)) return Outcome{false, "n=" + std::to_string(n)};
        }
        return Outcome{true, ""};
    }});

    out.push_back({"extremes: max P = P_n(1,n) = P_n(2,n) = P_n(1,n-1) = C_{n-1}, Q_n(n,n) = C_{n-1} > Q_n(2,n)" + upto,
                   [=] {
                       for (unsigned n = 4; n <= max_n; ++n) {
                           const auto p = full_matrix(PatternClass::p123, n, MatrixMode::exact);
                           const auto& c1 = catalan(n - 1);
                           BigCount mx = *std::max_element(p.exact.begin(), p.exact.end());
                           if (mx != c1 || p.exact_at(1, n) != c1 || p.exact_at(2, n) != c1 ||
                               p.exact_at(1, n - 1) != c1 || exact_P(n, 1, 1) != 1)
                               return Outcome{false, "P at n=" + std::to_string(n)};
                           if (exact_Q(n, n, n) != c1 || !(exact_Q(n, 2, n) < c1) || exact_Q(n, 1, 1) != 1)
                               return Outcome{false, "Q at n=" + std::to_string(n)};
                       }
                       return Outcome{true, ""};
                   }});
    return out;
}

/// n^{3/4} Q_n(n/2, n/2) / C_n on the given schedule.
inline std::vector<double> z_probe_values(const std::vector<unsigned>& ns) {
    std::vector<double> v;
    for (unsigned n : ns) v.push_back(std::pow(n, 0.75) * LogEvaluator(n).ratio_Q(n / 2, n / 2));
    return v;
}

struct ZSelection {
    std::vector<double> raw;
    Extrapolation extrapolated;
    double err_thm = 0, err_lem = 0;
    std::string selected;  // "z_thm", "z_lem" or "" when neither (or both) are within tolerance
};

inline ZSelection select_z(const std::vector<unsigned>& ns, double tolerance = 0.10) {
    ZSelection s;
    s.raw = z_probe_values(ns);
    s.extrapolated = extrapolate_geometric(s.raw);
    s.err_thm = std::abs(s.extrapolated.limit / limits::z_thm(0.5) - 1);
    s.err_lem = std::abs(s.extrapolated.limit / limits::z_lem(0.5) - 1);
    const bool thm = s.err_thm < tolerance, lem = s.err_lem < tolerance;
    if (thm != lem) s.selected = thm ? "z_thm" : "z_lem";
    return s;
}

inline std::vector<Check> convergence_checks() {
    using detail::fmt;
    std::vector<Check> out;

    out.push_back({"n^{3/2} P_n(n/2, n/2+1)/C_n -> xi(1/2,0), n in {400..3200}", [] {
        const double xi = limits::xi(0.5, 0);
        double prev = 1e9, last = 0;
        bool mono = true;
        for (unsigned n : {400u, 800u, 1600u, 3200u}) {
            last = std::pow(n, 1.5) * std::exp(LogEvaluator(n).log_ratio_P(n / 2, n / 2 + 1));
            const double e = std::abs(last / xi - 1);
            mono = mono && e < prev;
            prev = e;
        }
        return Outcome{mono && prev < 0.05, "final " + fmt(last) + " vs " + fmt(xi) + ", rel err " + fmt(prev, 3)};
    }});

    out.push_back({"Q_n(n,n)/C_n -> u(0) = 1/4 at n = 2000", [] {
        const double r = LogEvaluator(2000).ratio_Q(2000, 2000);
        return Outcome{std::abs(r / 0.25 - 1) < 0.01, fmt(r)};
    }});

    out.push_back({"(C_{n-3}+C_{n-2})/C_n = Q_n(n-1,n-1)/C_n -> u(1) = 5/64 at n = 2000", [] {
        const unsigned n = 2000;
        const double r = ratio_big(catalan(n - 3) + catalan(n - 2), catalan(n));
        const double q = LogEvaluator(n).ratio_Q(n - 1, n - 1);
        const double u1 = limits::u(1);
        return Outcome{std::abs(r / u1 - 1) < 0.01 && std::abs(q / r - 1) < 1e-9,
                       fmt(r) + " vs " + fmt(u1)};
    }});

    out.push_back({"z probe n^{3/4} Q_n(n/2,n/2)/C_n selects exactly one of z_thm / z_lem", [] {
        const auto s = select_z({500, 1000, 2000, 4000});
        std::string d = "raw";
        for (double v : s.raw) d += " " + fmt(v);
        d += "; extrapolated " + fmt(s.extrapolated.limit) + "; z_thm " + fmt(limits::z_thm(0.5)) + " (err " +
             fmt(s.err_thm, 3) + "), z_lem " + fmt(limits::z_lem(0.5)) + " (err " + fmt(s.err_lem, 3) +
             "); selected " + (s.selected.empty() ? "none" : s.selected);
        return Outcome{!s.selected.empty(), d};
    }});

    out.push_back({"E[fp] over S_n(123) at n = 4000 within 0.05 of 1/2", [] {
        const double v = exp_fp_exact(4000, PatternClass::p123).value;
        return Outcome{std::abs(v - 0.5) < 0.05, fmt(v, 10)};
    }});

    out.push_back({"E[fp] over S_n(231) grows like n^{1/4}", [] {
        std::vector<double> ns{500, 1000, 2000, 4000}, vs;
        for (double n : ns) vs.push_back(exp_fp_exact(static_cast<unsigned>(n), PatternClass::p231).value);
        const auto f = slope_probe(ns, vs);
        std::string d = "slope " + fmt(f.slope, 4) + "; E/n^{1/4}:";
        for (std::size_t i = 0; i < ns.size(); ++i) d += " " + fmt(vs[i] / std::pow(ns[i], 0.25));
        return Outcome{std::abs(f.slope - 0.25) < 0.05, d};
    }});

    out.push_back({"log(P_n(0.3n,0.4n)/C_n)/n is negative at n = 2000", [] {
        const unsigned n = 2000;
        const double v = LogEvaluator(n).log_ratio_P(600, 800) / n;
        return Outcome{v <= -0.01, fmt(v)};
    }});
    return out;
}

inline std::vector<Check> figure_checks() {
    std::vector<Check> out;
    out.push_back({"C_250 has 147 digits and starts 4.65", [] {
        const auto s = to_string(catalan(250));
        return Outcome{s.size() == 147 && s.rfind("465", 0) == 0, s.substr(0, 6) + "... (" + std::to_string(s.size()) +
                                                                       " digits)"};
    }});
    out.push_back({"argmax_k P_250(k,k) = 118", [] {
        const auto p = diagonal_profile(PatternClass::p123, 250, false);
        const unsigned a = profile_argmax(p);
        return Outcome{a == 118, std::to_string(a)};
    }});
    out.push_back({"peak of the Q_250(k,k) wall = 119 (corner spike Q(250,250)=C_249 excluded)", [] {
        const auto q = diagonal_profile(PatternClass::p132, 250, false);
        const unsigned a = interior_peak(q);
        return Outcome{a == 119, std::to_string(a) + "; global argmax " + std::to_string(profile_argmax(q))};
    }});
    return out;
}

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"oracle", "symmetry", "convergence", "figures"};
    return names;
}

/// Runs one suite; max_n bounds the exhaustive suites. Returns the number of failures.
inline unsigned run_suite(const std::string& suite, unsigned max_n, std::ostream& os) {
    std::vector<Check> checks;
    if (suite == "oracle") checks = oracle_checks(max_n);
    else if (suite == "symmetry") checks = symmetry_checks(max_n);
    else if (suite == "convergence") checks = convergence_checks();
    else if (suite == "figures") checks = figure_checks();
    else throw domain_error("unknown suite '" + suite + "' (oracle, symmetry, convergence, figures)");
    Runner r(os);
    for (const auto& c : checks) r.run(c);
    os << suite << ": " << r.passed() << " passed, " << r.failed() << " failed\n";
    return r.failed();
}

}  // namespace permshape::verify
