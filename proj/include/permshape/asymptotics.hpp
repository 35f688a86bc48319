#pragma once

// Limit constants, regime exponents and decay classes for entries of P_n and Q_n
// along the lines j = an - cn^alpha, k = bn - cn^alpha.

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "bigcount.hpp"
#include "errors.hpp"
#include "exactcore.hpp"

namespace permshape {

namespace limits {

inline constexpr double inv_sqrt_pi = std::numbers::inv_sqrtpi;
inline constexpr double pi = std::numbers::pi;

namespace detail {

inline void require_open_unit(double a, const char* who) {
    if (!(a > 0.0 && a < 1.0)) throw domain_error(std::string(who) + ": requires 0 < a < 1");
}

inline double var(double a) { return a * (1.0 - a); }

}  // namespace detail

inline double xi(double a, double c) {
    detail::require_open_unit(a, "xi");
    return (2 * c + 1) * (2 * c + 1) * inv_sqrt_pi / (4 * std::pow(detail::var(a), 1.5));
}

inline double eta(double a, double c) {
    detail::require_open_unit(a, "eta");
    return c * c * inv_sqrt_pi / std::pow(detail::var(a), 1.5);
}

inline double kappa(double a, double c) {
    detail::require_open_unit(a, "kappa");
    return std::exp(-c * c / detail::var(a));
}

/// u(c) = sum_{s=0}^{c} ((s+1)/(2c+1-s))^2 binom(2c+1-s, c+1)^2 4^{s-2c-1}, exactly.
inline Rational u_exact(long c) {
    if (c < 0) throw domain_error("u: requires integer c >= 0");
    Rational total = 0;
    for (long s = 0; s <= c; ++s) {
        const auto top = static_cast<unsigned>(2 * c + 1 - s);
        BigCount b = binomial(top, static_cast<unsigned>(c + 1));
        Rational term(BigCount((s + 1) * (s + 1)) * b * b, BigCount(top) * top);
        BigCount four = 1;
        four <<= static_cast<unsigned>(2 * (2 * c + 1 - s));
        term /= Rational(four);
        total += term;
    }
    return total;
}

inline double u(double c) {
    if (c < 0 || c != std::floor(c)) throw domain_error("u: requires integer c >= 0");
    return to_double(u_exact(static_cast<long>(c)));
}

inline double v(double a, double b) {
    const double s = a + b;
    if (!(s > 1.0 && s < 2.0)) throw domain_error("v: requires 1 < a+b < 2");
    return inv_sqrt_pi / (2 * std::pow(2 - s, 1.5) * std::pow(s - 1, 1.5));
}

inline double w(double c) {
    if (!(c > 0)) throw domain_error("w: requires c > 0");
    return inv_sqrt_pi / (std::pow(2.0, 2.5) * std::pow(c, 1.5));
}

/// x(a,c) = 1/(4 pi (a(1-a))^{3/2}) * int_0^inf s^2 (s+2c)^{-3/2} exp(-s^2/(4a(1-a))) ds.
/// Adaptive Gauss-Kronrod on [0, s_max], s_max where the Gaussian factor is 1e-16.
inline double x(double a, double c) {
    detail::require_open_unit(a, "x");
    if (!(c > 0)) throw domain_error("x: requires c > 0");
    const double q = 4 * detail::var(a);
    const double s_max = std::sqrt(q * 16.0 * std::numbers::ln10);
    auto f = [&](double s) { return s * s / std::pow(s + 2 * c, 1.5) * std::exp(-s * s / q); };
    // Split at 2c: the (s+2c)^{-3/2} factor varies on that scale.
    const double mid = std::min(2 * c, s_max / 2);
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double integral = GK::integrate(f, 0.0, mid, 15, 1e-10) + GK::integrate(f, mid, s_max, 15, 1e-10);
    return integral / (4 * pi * std::pow(detail::var(a), 1.5));
}

inline double y(double a, double c) {
    detail::require_open_unit(a, "y");
    return 2 * c * c * inv_sqrt_pi / std::pow(detail::var(a), 1.5);
}

/// Gamma(3/4) / (2^{3/2} pi (a(1-a))^{3/4}); the variant selected by the n^{3/4} probe.
inline double z_thm(double a) {
    detail::require_open_unit(a, "z");
    return std::tgamma(0.75) / (std::pow(2.0, 1.5) * pi * std::pow(detail::var(a), 0.75));
}

/// The same expression with 2^{9/4} in the denominator.
inline double z_lem(double a) {
    detail::require_open_unit(a, "z");
    return std::tgamma(0.75) / (std::pow(2.0, 2.25) * pi * std::pow(detail::var(a), 0.75));
}

inline double z(double a) { return z_thm(a); }

}  // namespace limits

enum class LimitKind { xi, eta, kappa, u, v, w, x, y, z, z_thm, z_lem };

inline LimitKind parse_limit_kind(const std::string& s) {
    if (s == "xi") return LimitKind::xi;
    if (s == "eta") return LimitKind::eta;
    if (s == "kappa") return LimitKind::kappa;
    if (s == "u") return LimitKind::u;
    if (s == "v") return LimitKind::v;
    if (s == "w") return LimitKind::w;
    if (s == "x") return LimitKind::x;
    if (s == "y") return LimitKind::y;
    if (s == "z") return LimitKind::z;
    if (s == "z_thm") return LimitKind::z_thm;
    if (s == "z_lem") return LimitKind::z_lem;
    throw domain_error("unknown limit constant '" + s + "'");
}

/// Uniform entry point: (a, c) for xi/eta/kappa/x/y, (a) for z, (c) for u/w, (a, b) for v.
inline double limit_constant(LimitKind kind, double p1, double p2 = 0.0) {
    switch (kind) {
        case LimitKind::xi: return limits::xi(p1, p2);
        case LimitKind::eta: return limits::eta(p1, p2);
        case LimitKind::kappa: return limits::kappa(p1, p2);
        case LimitKind::u: return limits::u(p1);
        case LimitKind::v: return limits::v(p1, p2);
        case LimitKind::w: return limits::w(p1);
        case LimitKind::x: return limits::x(p1, p2);
        case LimitKind::y: return limits::y(p1, p2);
        case LimitKind::z:
        case LimitKind::z_thm: return limits::z_thm(p1);
        case LimitKind::z_lem: return limits::z_lem(p1);
    }
    throw domain_error("limit_constant: unknown kind");
}

// ---------------------------------------------------------------------------
// Regime classification

struct RegimeQuery {
    double a = 0.5;
    double b = 0.5;
    double c = 0.0;
    double alpha = 0.0;
};

enum class Decay { none, exp_n, exp_n_pow };

inline std::string name(Decay d) {
    switch (d) {
        case Decay::none: return "none";
        case Decay::exp_n: return "exp_n";
        case Decay::exp_n_pow: return "exp_n_pow";
    }
    return "?";
}

struct RegimeResult {
    double exponent = 0.0;  // +inf when the entry decays faster than any power
    std::optional<double> limit_constant;
    std::string constant_name;  // formula used for limit_constant, e.g. "eta*kappa"
    Decay decay = Decay::none;
    double decay_power = 0.0;  // for exp_n_pow: the entry is below eps^{n^decay_power}
    bool offset = false;       // the limit refers to the column index shifted by +1
    std::vector<std::string> notes;

    bool finite() const { return std::isfinite(exponent); }
};

namespace detail {

inline constexpr double tol = 1e-12;
inline bool near(double x, double y) { return std::abs(x - y) <= tol; }

inline void check_query(const RegimeQuery& q) {
    if (!(q.a >= 0 && q.a <= 1)) throw domain_error("regime: a must lie in [0,1]");
    if (!(q.b >= 0 && q.b <= 1)) throw domain_error("regime: b must lie in [0,1]");
    if (!(q.alpha >= 0 && q.alpha < 1)) throw domain_error("regime: alpha must lie in [0,1)");
    if (!std::isfinite(q.c)) throw domain_error("regime: c must be finite");
}

inline RegimeResult infinite(Decay d, double power = 0.0) {
    RegimeResult r;
    r.exponent = std::numeric_limits<double>::infinity();
    r.decay = d;
    r.decay_power = power;
    return r;
}

inline RegimeResult finite(double exponent) {
    RegimeResult r;
    r.exponent = exponent;
    return r;
}

// Evaluates a constant unless a sits on the boundary where a(1-a) = 0.
template <typename Fn>
void attach(RegimeResult& r, const RegimeQuery& q, const std::string& label, Fn&& fn) {
    r.constant_name = label;
    if (q.a <= 0 || q.a >= 1) {
        r.notes.push_back("limit constant " + label + " is undefined for a in {0,1}");
        return;
    }
    r.limit_constant = fn();
}

}  // namespace detail

/// Exponent and limit constant for P_n(an - cn^alpha, bn - cn^alpha).
inline RegimeResult regime_F(const RegimeQuery& q) {
    detail::check_query(q);
    const double s = q.a + q.b;
    if (!detail::near(s, 1.0)) return detail::infinite(Decay::exp_n);
    if (detail::near(q.c, 0.0)) {
        auto r = detail::finite(1.5);
        r.offset = true;
        detail::attach(r, q, "xi", [&] { return limits::xi(q.a, 0.0); });
        return r;
    }
    if (q.alpha > 0.5 + detail::tol) return detail::infinite(Decay::exp_n_pow, 2 * q.alpha - 1);
    auto r = detail::finite(1.5 - 2 * q.alpha);
    if (detail::near(q.alpha, 0.0)) {
        r.offset = true;
        detail::attach(r, q, "xi", [&] { return limits::xi(q.a, q.c); });
    } else if (q.alpha < 0.5 - detail::tol) {
        detail::attach(r, q, "eta", [&] { return limits::eta(q.a, q.c); });
    } else {
        detail::attach(r, q, "eta*kappa", [&] { return limits::eta(q.a, q.c) * limits::kappa(q.a, q.c); });
    }
    return r;
}

/// Exponent and limit constant for Q_n(an - cn^alpha, bn - cn^alpha).
///
/// Decision table on the anti-diagonal a+b = 1 (boundary alphas take the "=" rows):
///   c = 0                     3/4        z
///   c > 0, alpha < 3/8        3/4        z
///   c > 0, alpha = 3/8        3/4        z + y
///   c > 0, 3/8 < alpha < 1/2  3/2-2alpha y
///   c > 0, alpha = 1/2        1/2        y*kappa
///   c > 0, alpha > 1/2        inf        decay exp(n^{2alpha-1})
///   c < 0, alpha < 1/2        3/4        z
///   c < 0, alpha = 1/2        3/4        x(a,|c|)
///   c < 0, alpha > 1/2        3alpha/2   w(|c|)
inline RegimeResult regime_G(const RegimeQuery& q) {
    detail::check_query(q);
    const double s = q.a + q.b;
    const double c = q.c, al = q.alpha;
    using detail::near;
    using detail::tol;

    if (s < 1.0 - tol) return detail::infinite(Decay::exp_n);
    if (s > 1.0 + tol && s < 2.0 - tol) {
        auto r = detail::finite(1.5);
        r.constant_name = "v";
        r.limit_constant = limits::v(q.a, q.b);
        return r;
    }
    if (near(q.a, 1.0) && near(q.b, 1.0)) {
        if (c < -tol) throw classification_error("regime_G: a=b=1 requires c >= 0 (indices exceed n otherwise)");
        if (near(al, 0.0) || near(c, 0.0)) {
            auto r = detail::finite(0.0);
            r.constant_name = "u";
            if (near(c, std::round(c))) r.limit_constant = limits::u(std::round(c));
            else r.notes.push_back("u(c) needs integer c; c=" + std::to_string(c) + " is not");
            return r;
        }
        auto r = detail::finite(1.5 * al);
        r.constant_name = "w";
        r.limit_constant = limits::w(c);
        return r;
    }
    if (!near(s, 1.0))
        throw classification_error("regime_G: a+b=" + std::to_string(s) +
                                   " matches no branch (a+b=2 requires a=b=1)");

    RegimeResult r;
    if (near(c, 0.0)) {
        r = detail::finite(0.75);
        detail::attach(r, q, "z", [&] { return limits::z(q.a); });
    } else if (c > 0) {
        if (al > 0.5 + tol) return detail::infinite(Decay::exp_n_pow, 2 * al - 1);
        if (al < 0.375 - tol) {
            r = detail::finite(0.75);
            detail::attach(r, q, "z", [&] { return limits::z(q.a); });
        } else if (near(al, 0.375)) {
            r = detail::finite(0.75);
            detail::attach(r, q, "z+y", [&] { return limits::z(q.a) + limits::y(q.a, c); });
        } else if (al < 0.5 - tol) {
            r = detail::finite(1.5 - 2 * al);
            detail::attach(r, q, "y", [&] { return limits::y(q.a, c); });
        } else {
            r = detail::finite(0.5);
            detail::attach(r, q, "y*kappa", [&] { return limits::y(q.a, c) * limits::kappa(q.a, c); });
        }
    } else {
        const double m = -c;
        if (al < 0.5 - tol) {
            r = detail::finite(0.75);
            detail::attach(r, q, "z", [&] { return limits::z(q.a); });
        } else if (near(al, 0.5)) {
            r = detail::finite(0.75);
            detail::attach(r, q, "x", [&] { return limits::x(q.a, m); });
        } else {
            r = detail::finite(1.5 * al);
            r.constant_name = "w";
            r.limit_constant = limits::w(m);
        }
        if (al >= 0.5 - tol) r.notes.push_back("c < 0: constant evaluated at |c|");
    }
    return r;
}

/// Cell indices (j, k) for a query at size n, rounded to the nearest integer.
/// `offset` adds 1 to k, matching RegimeResult::offset.
inline std::pair<long, long> regime_cell(const RegimeQuery& q, unsigned n, bool offset) {
    const double shift = q.c * std::pow(static_cast<double>(n), q.alpha);
    const long j = std::lround(q.a * n - shift);
    const long k = std::lround(q.b * n - shift) + (offset ? 1 : 0);
    return {j, k};
}

inline std::string describe(const RegimeResult& r) {
    std::ostringstream os;
    os.precision(12);
    os << "exponent " << (r.finite() ? std::to_string(r.exponent) : std::string("inf"));
    os << "\nlimit_constant ";
    if (r.limit_constant) os << r.constant_name << " = " << *r.limit_constant;
    else os << "undefined";
    os << "\ndecay " << name(r.decay);
    if (r.decay == Decay::exp_n_pow) os << " power " << r.decay_power;
    os << "\noffset " << (r.offset ? "yes" : "no");
    for (const auto& note : r.notes) os << "\nnote " << note;
    os << '\n';
    return os.str();
}

// ---------------------------------------------------------------------------
// Technical functions, evaluated in log space with 0 log 0 = 0.

namespace detail {

inline double xlogx(double v) {
    if (v < 0) return std::numeric_limits<double>::quiet_NaN();
    return v == 0 ? 0.0 : v * std::log(v);
}

}  // namespace detail

/// (1-a+b)^{1-a+b} (1-b+a)^{1-b+a} / (a^a (1-a)^{1-a} b^b (1-b)^{1-b}); at most 4, with
/// equality exactly on b = 1-a.
inline double h_P(double a, double b) {
    using detail::xlogx;
    const double lg = xlogx(1 - a + b) + xlogx(1 - b + a) - xlogx(a) - xlogx(1 - a) - xlogx(b) - xlogx(1 - b);
    return std::exp(lg);
}

/// 4^{ast} (1-at+a-ast)^{1-at+a-ast} (1-a+at-ast)^{1-a+at-ast}
///   / ((1-at)^{1-at} (a-ast)^{a-ast} (1-a)^{1-a} (at-ast)^{at-ast});
/// at most 4, equal to 4 on s = (at+a-1)/(at).
inline double h_Q(double a, double s, double t) {
    using detail::xlogx;
    const double ast = a * s * t, at = a * t;
    const double lg = ast * std::log(4.0) + xlogx(1 - at + a - ast) + xlogx(1 - a + at - ast) - xlogx(1 - at) -
                      xlogx(a - ast) - xlogx(1 - a) - xlogx(at - ast);
    return std::exp(lg);
}

}  // namespace permshape
