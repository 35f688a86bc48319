// Uniform samples from the four classes and a Monte Carlo estimate.
#include <iostream>

#include <permshape/bijections.hpp>
#include <permshape/statlab.hpp>

using namespace permshape;

int main() {
    SeededRng rng(2024);
    for (auto c : {PatternClass::p123, PatternClass::p132, PatternClass::p321, PatternClass::p231}) {
        const auto p = sample_avoider(12, c, rng);
        std::cout << name(c) << "  " << p.to_string() << (avoids(p, c) ? "" : "  (contains!)") << '\n';
    }

    const auto d = sample_dyck(10, rng);
    std::cout << "\nDyck path " << d.to_string() << " -> " << phi(d).to_string() << '\n';

    const auto r = mc_expectation(StatKind::fp, PatternClass::p231, 2000, 20000, 7);
    std::cout << "\nE[fp] over S_2000(231): mc " << r.value << " +- " << r.stderr_
              << ", exact " << exp_fp_exact(2000, PatternClass::p231).value << '\n';
}
