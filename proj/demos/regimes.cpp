// Regime classification next to the measured growth of the normalized cells.
#include <iomanip>
#include <iostream>

#include <permshape/statlab.hpp>

using namespace permshape;

int main() {
    const std::vector<std::pair<Theorem, RegimeQuery>> qs{
        {Theorem::F, {0.5, 0.5, 0, 0}},  {Theorem::F, {0.5, 0.5, 1, 0.25}}, {Theorem::F, {0.3, 0.4, 0, 0}},
        {Theorem::G, {1, 1, 0, 0}},      {Theorem::G, {0.6, 0.6, 1, 0.4}},  {Theorem::G, {0.5, 0.5, 0, 0}},
        {Theorem::G, {0.5, 0.5, -1, 0.5}},
    };
    const std::vector<unsigned> ns{250, 500, 1000, 2000};
    std::cout << std::setprecision(4);
    for (const auto& [t, q] : qs) {
        const auto r = classify(t, q);
        std::cout << (t == Theorem::F ? "F" : "G") << '(' << q.a << ',' << q.b << ',' << q.c << ',' << q.alpha << ")";
        if (r.finite()) std::cout << "  fitted exponent on n = 250..2000: " << regime_slope(t, q, ns).slope;
        std::cout << '\n' << describe(r) << '\n';
    }
}
