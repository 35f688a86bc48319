#pragma once

// The `permshape` command line. run() is the whole program minus main(), so tests
// can drive it with in-memory streams.
//
// Exit codes: 0 success, 1 a verify check failed, 2 bad flags or domain error,
// 3 internal consistency error.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "asymptotics.hpp"
#include "bijections.hpp"
#include "csv.hpp"
#include "errors.hpp"
#include "exactcore.hpp"
#include "pattern_class.hpp"
#include "permkit.hpp"
#include "statlab.hpp"
#include "verify.hpp"

namespace permshape::cli {

inline IndexRange parse_range(const std::string& s, unsigned n) {
    if (s.empty()) return {1, n};
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw domain_error("range must look like a:b, got '" + s + "'");
    try {
        const unsigned long lo = std::stoul(s.substr(0, colon));
        const unsigned long hi = std::stoul(s.substr(colon + 1));
        return {static_cast<unsigned>(lo), static_cast<unsigned>(hi)};
    } catch (const std::logic_error&) {
        throw domain_error("range must look like a:b, got '" + s + "'");
    }
}

inline MatrixMode parse_mode(const std::string& s) {
    if (s == "exact") return MatrixMode::exact;
    if (s == "normalized") return MatrixMode::normalized;
    throw domain_error("mode must be exact or normalized, got '" + s + "'");
}

namespace detail {

// Writes to --out when given, else to the default stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw domain_error("cannot open output file '" + path + "'");
            os_ = file_.get();
        }
    }
    std::ostream& operator*() { return *os_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* os_;
};

inline PatternClass matrix_pattern(const std::string& s) {
    const auto p = parse_pattern_class(s);
    if (p != PatternClass::p123 && p != PatternClass::p132)
        throw domain_error("--pattern must be 123 or 132 for matrices, got '" + s + "'");
    return p;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact and asymptotic computations for 123- and 132-avoiding permutations", "permshape"};
    app.require_subcommand(1);

    // matrix
    std::string m_pattern, m_mode = "exact", m_rows, m_cols, m_out;
    unsigned m_n = 0, threads = 1, threshold = 2000;
    auto* matrix = app.add_subcommand("matrix", "export a block of P_n (123) or Q_n (132) as CSV");
    matrix->add_option("--pattern", m_pattern, "123 or 132")->required();
    matrix->add_option("--n", m_n, "size")->required();
    matrix->add_option("--mode", m_mode, "exact or normalized");
    matrix->add_option("--rows", m_rows, "row range a:b (default all)");
    matrix->add_option("--cols", m_cols, "column range a:b (default all)");
    matrix->add_option("--out", m_out, "output file (default stdout)");
    matrix->add_option("--threads", threads, "worker threads");
    matrix->add_option("--logspace-threshold", threshold, "normalized mode uses log space above this n");

    // diag
    std::string d_pattern, d_mode = "normalized", d_out;
    unsigned d_n = 0;
    bool d_anti = false, d_peak = false;
    auto* diag = app.add_subcommand("diag", "diagonal or anti-diagonal profile as CSV");
    diag->add_option("--pattern", d_pattern, "123, 132 or both")->required();
    diag->add_option("--n", d_n, "size")->required();
    diag->add_flag("--anti", d_anti, "use the anti-diagonal (k, n+1-k)");
    diag->add_option("--mode", d_mode, "normalized (default) or exact");
    diag->add_flag("--peak", d_peak, "print the argmax and the interior peak instead of CSV");
    diag->add_option("--out", d_out, "output file (default stdout)");
    diag->add_option("--threads", threads, "worker threads");

    // sample
    std::string s_pattern, s_out;
    unsigned s_n = 0;
    std::uint64_t s_count = 1, s_seed = 0;
    auto* sample = app.add_subcommand("sample", "uniform random avoiders, one per line");
    sample->add_option("--pattern", s_pattern, "123, 132, 321, 231 or all")->required();
    sample->add_option("--n", s_n, "size")->required();
    sample->add_option("--count", s_count, "number of permutations")->required();
    sample->add_option("--seed", s_seed, "random seed")->required();
    sample->add_option("--out", s_out, "output file (default stdout)");

    // stats
    std::string t_stat, t_pattern;
    unsigned t_n = 0;
    double t_lambda = 1.0;
    bool t_exact = false, t_mc = false;
    std::uint64_t t_samples = 10000, t_seed = 0;
    auto* stats = app.add_subcommand("stats", "expectation of a statistic, one report line");
    stats->add_option("--stat", t_stat, "fp, afp, first, last, lis, rank, chi2, ldr or rmax")->required();
    stats->add_option("--lambda", t_lambda, "lambda for rank");
    stats->add_option("--pattern", t_pattern, "123, 132, 321, 231 or all")->required();
    stats->add_option("--n", t_n, "size")->required();
    auto* ex = stats->add_flag("--exact", t_exact, "exact expectation");
    auto* mc = stats->add_flag("--mc", t_mc, "Monte Carlo expectation");
    ex->excludes(mc);
    stats->add_option("--samples", t_samples, "Monte Carlo samples");
    stats->add_option("--seed", t_seed, "Monte Carlo seed");
    stats->add_option("--threads", threads, "worker threads");

    // limit
    std::string l_theorem;
    RegimeQuery q;
    auto* limit = app.add_subcommand("limit", "regime exponent, limit constant and decay class");
    limit->add_option("--theorem", l_theorem, "F (P entries) or G (Q entries)")->required();
    limit->add_option("--a", q.a, "a in [0,1]")->required();
    limit->add_option("--b", q.b, "b in [0,1]")->required();
    limit->add_option("--c", q.c, "c")->required();
    limit->add_option("--alpha", q.alpha, "alpha in [0,1)")->required();

    // verify
    std::string v_suite;
    unsigned v_max_n = 0;
    auto* verify = app.add_subcommand("verify", "run a self-check suite");
    verify->add_option("--suite", v_suite, "oracle, symmetry, convergence, figures or all")->required();
    verify->add_option("--max-n", v_max_n, "bound for exhaustive suites (oracle 9, symmetry 60 by default)");

    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (*matrix) {
            const auto pat = detail::matrix_pattern(m_pattern);
            SliceOptions opts{threads, threshold};
            const auto slice = matrix_slice(pat, m_n, parse_range(m_rows, m_n), parse_range(m_cols, m_n),
                                            parse_mode(m_mode), opts);
            detail::Sink sink(m_out, out);
            csv::write_slice(*sink, slice);
        } else if (*diag) {
            const auto mode = parse_mode(d_mode);
            SliceOptions opts{threads, 2000};
            std::vector<Profile> ps;
            if (d_pattern == "both") {
                ps.push_back(diagonal_profile(PatternClass::p123, d_n, d_anti, opts));
                ps.push_back(diagonal_profile(PatternClass::p132, d_n, d_anti, opts));
            } else {
                ps.push_back(diagonal_profile(detail::matrix_pattern(d_pattern), d_n, d_anti, opts));
            }
            detail::Sink sink(d_out, out);
            if (d_peak) {
                for (const auto& p : ps)
                    *sink << "pattern " << name(p.pattern) << " n " << p.n << " argmax " << profile_argmax(p)
                          << " interior_peak " << interior_peak(p) << '\n';
            } else if (ps.size() == 2) {
                csv::write_profiles(*sink, ps[0], ps[1], mode);
            } else {
                csv::write_profile(*sink, ps[0], mode);
            }
        } else if (*sample) {
            const auto pat = parse_pattern_class(s_pattern);
            SeededRng rng(s_seed);
            detail::Sink sink(s_out, out);
            for (std::uint64_t i = 0; i < s_count; ++i) write_permutation(*sink, sample_avoider(s_n, pat, rng));
        } else if (*stats) {
            const auto kind = parse_stat_kind(t_stat);
            const auto pat = parse_pattern_class(t_pattern);
            if (t_exact == t_mc) throw domain_error("stats needs exactly one of --exact or --mc");
            ExpectationReport r;
            if (t_mc) {
                r = mc_expectation(kind, pat, t_n, t_samples, t_seed, {t_lambda, threads});
            } else {
                ExactLimits lim;
                lim.threads = threads;
                switch (kind) {
                    case StatKind::fp:
                    case StatKind::afp: r = exp_diagonal_exact(kind, t_n, pat, lim); break;
                    case StatKind::first:
                    case StatKind::last: r = exp_position_exact(t_n, pat, kind == StatKind::last); break;
                    case StatKind::chi2: r = exp_chi2_exact(t_n, pat, lim); break;
                    default:
                        if (t_n > max_enumeration_n)
                            throw domain_error("exact " + name(kind) + " is only available by enumeration, n <= " +
                                               std::to_string(max_enumeration_n));
                        r = exp_by_enumeration(kind, pat, t_n, t_lambda);
                }
            }
            out << r.serialize() << '\n';
        } else if (*limit) {
            const auto th = parse_theorem(l_theorem);
            out << "theorem " << (th == Theorem::F ? "F" : "G") << '\n' << describe(classify(th, q));
        } else if (*verify) {
            const auto& names = verify::suite_names();
            const bool all = v_suite == "all";
            if (!all && std::find(names.begin(), names.end(), v_suite) == names.end())
                throw domain_error("unknown suite '" + v_suite + "' (oracle, symmetry, convergence, figures, all)");
            unsigned failures = 0;
            for (const auto& s : names) {
                if (!all && s != v_suite) continue;
                const unsigned k = v_max_n ? v_max_n : (s == "symmetry" ? 60u : 9u);
                failures += verify::run_suite(s, k, out);
            }
            return failures ? 1 : 0;
        }
    } catch (const consistency_error& e) {
        err << "internal error: " << e.what() << '\n';
        return 3;
    } catch (const domain_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

}  // namespace permshape::cli
