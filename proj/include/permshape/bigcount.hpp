#pragma once

#include <cmath>
#include <numbers>
#include <limits>
#include <string>

#include <boost/multiprecision/gmp.hpp>

namespace permshape {

using BigCount = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

/// Natural log of a nonnegative bignum, accurate to a few ulps regardless of size.
/// log(0) is -inf.
inline double log_big(const BigCount& x) {
    if (x.sign() == 0) return -std::numeric_limits<double>::infinity();
    long exp2 = 0;
    const double mant = mpz_get_d_2exp(&exp2, x.backend().data());
    return std::log(mant) + static_cast<double>(exp2) * std::numbers::ln2;
}

/// log(num/den) without forming the quotient; exponents are subtracted as integers
/// so no precision is lost for huge operands.
inline double log_ratio_big(const BigCount& num, const BigCount& den) {
    if (num.sign() == 0) return -std::numeric_limits<double>::infinity();
    long e1 = 0, e2 = 0;
    const double m1 = mpz_get_d_2exp(&e1, num.backend().data());
    const double m2 = mpz_get_d_2exp(&e2, den.backend().data());
    return std::log(m1 / m2) + static_cast<double>(e1 - e2) * std::numbers::ln2;
}

/// num/den as a double, correctly scaled even when both exceed the double range.
inline double ratio_big(const BigCount& num, const BigCount& den) {
    if (num.sign() == 0) return 0.0;
    long e1 = 0, e2 = 0;
    const double m1 = mpz_get_d_2exp(&e1, num.backend().data());
    const double m2 = mpz_get_d_2exp(&e2, den.backend().data());
    return std::ldexp(m1 / m2, static_cast<int>(e1 - e2));
}

inline double to_double(const Rational& q) {
    // mpz_get_d_2exp keeps the sign of the numerator.
    return ratio_big(boost::multiprecision::numerator(q), boost::multiprecision::denominator(q));
}

inline std::string to_string(const BigCount& x) { return x.str(); }

inline std::string to_string(const Rational& q) { return q.str(); }

}  // namespace permshape
