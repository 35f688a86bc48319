#pragma once

#include <string>
#include <string_view>

#include "errors.hpp"

namespace permshape {

/// The four length-3 avoidance classes the toolkit samples and analyses, plus the
/// unrestricted symmetric group used as a baseline for statistics.
enum class PatternClass { p123, p132, p321, p231, unrestricted };

inline std::string_view name(PatternClass c) {
    switch (c) {
        case PatternClass::p123: return "123";
        case PatternClass::p132: return "132";
        case PatternClass::p321: return "321";
        case PatternClass::p231: return "231";
        case PatternClass::unrestricted: return "all";
    }
    return "?";
}

inline PatternClass parse_pattern_class(std::string_view s) {
    if (s == "123") return PatternClass::p123;
    if (s == "132") return PatternClass::p132;
    if (s == "321") return PatternClass::p321;
    if (s == "231") return PatternClass::p231;
    if (s == "all" || s == "S") return PatternClass::unrestricted;
    throw domain_error("unsupported pattern class '" + std::string(s) + "' (expected 123, 132, 321, 231 or all)");
}

}  // namespace permshape
