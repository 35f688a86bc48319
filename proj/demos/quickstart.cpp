// Exact position counts, a few statistics, and one limit constant.
#include <iostream>

#include <permshape/asymptotics.hpp>
#include <permshape/exactcore.hpp>
#include <permshape/statlab.hpp>

using namespace permshape;

int main() {
    std::cout << "P_7(4,3) = " << to_string(exact_P(7, 4, 3)) << '\n';
    std::cout << "Q_7(4,3) = " << to_string(exact_Q(7, 4, 3)) << '\n';

    const unsigned n = 8;
    std::cout << "\nP_" << n << " (123-avoiders, sigma(j) = k)\n";
    for (unsigned j = 1; j <= n; ++j) {
        for (unsigned k = 1; k <= n; ++k) std::cout << '\t' << to_string(exact_P(n, j, k));
        std::cout << '\n';
    }

    std::cout << "\nE[fp] at n = 1000:\n";
    for (auto c : {PatternClass::p123, PatternClass::p132, PatternClass::p321, PatternClass::p231})
        std::cout << "  " << name(c) << "  " << exp_fp_exact(1000, c).value << '\n';

    std::cout << "\nE[sigma(1)] over S_20(123) = " << to_string(*exp_position_exact(20, PositionQuery::first_123).exact)
              << '\n';
    std::cout << "Q_n(n,n)/C_n tends to " << limits::u(0) << '\n';
}
