#pragma once

#include <stdexcept>
#include <string>

namespace permshape {

// Bad arguments: out-of-range indices, malformed paths, unsupported patterns.
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// An internal invariant failed (e.g. a ballot division left a remainder).
// Always signals a bug upstream, never bad user input.
class consistency_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Regime parameters that match no branch of the exponent tables.
class classification_error : public domain_error {
public:
    using domain_error::domain_error;
};

}  // namespace permshape
