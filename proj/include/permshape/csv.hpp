#pragma once

// CSV export for matrix slices and diagonal profiles.
//
// Schema: header `j,k,value`. Exact entries are full decimal integers, normalized
// entries are count/C_n in scientific notation with 12 significant digits.
// A profile of both patterns uses `j,k,P,Q`.

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bigcount.hpp"
#include "errors.hpp"
#include "exactcore.hpp"

namespace permshape::csv {

inline std::string format_ratio(double r) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.11e", r);
    return buf;
}

inline void write_slice(std::ostream& os, const MatrixSlice& s) {
    os << "j,k,value\n";
    for (unsigned j = s.rows.lo; j <= s.rows.hi && s.rows.size(); ++j)
        for (unsigned k = s.cols.lo; k <= s.cols.hi; ++k) {
            os << j << ',' << k << ',';
            if (s.mode == MatrixMode::exact) os << s.exact_at(j, k);
            else os << format_ratio(s.normalized_at(j, k).ratio);
            os << '\n';
        }
}

namespace detail {

inline std::string profile_value(const Profile& p, const ProfilePoint& pt, MatrixMode mode) {
    if (mode == MatrixMode::exact) {
        if (!p.exact) throw domain_error("exact profile values are not available above the log-space threshold");
        return to_string(pt.exact);
    }
    return format_ratio(pt.normalized.ratio);
}

inline unsigned profile_col(const Profile& p, unsigned k) { return p.anti ? p.n + 1 - k : k; }

}  // namespace detail

inline void write_profile(std::ostream& os, const Profile& p, MatrixMode mode) {
    os << "j,k,value\n";
    for (const auto& pt : p.points)
        os << pt.k << ',' << detail::profile_col(p, pt.k) << ',' << detail::profile_value(p, pt, mode) << '\n';
}

/// Side-by-side P and Q profiles over the same cells.
inline void write_profiles(std::ostream& os, const Profile& p, const Profile& q, MatrixMode mode) {
    if (p.n != q.n || p.anti != q.anti) throw domain_error("write_profiles: profiles differ in shape");
    os << "j,k,P,Q\n";
    for (std::size_t i = 0; i < p.points.size(); ++i)
        os << p.points[i].k << ',' << detail::profile_col(p, p.points[i].k) << ','
           << detail::profile_value(p, p.points[i], mode) << ',' << detail::profile_value(q, q.points[i], mode)
           << '\n';
}

struct Row {
    unsigned j = 0;
    unsigned k = 0;
    std::vector<std::string> values;
};

/// Parses any of the schemas above; the header is checked for the j,k prefix.
inline std::vector<Row> read(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("j,k,", 0) != 0) throw domain_error("csv: missing j,k header");
    std::vector<Row> rows;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> f;
        while (std::getline(ss, field, ',')) f.push_back(field);
        if (f.size() < 3) throw domain_error("csv: too few fields on line " + std::to_string(lineno));
        Row r;
        try {
            r.j = static_cast<unsigned>(std::stoul(f[0]));
            r.k = static_cast<unsigned>(std::stoul(f[1]));
        } catch (const std::exception&) {
            throw domain_error("csv: bad index on line " + std::to_string(lineno));
        }
        r.values.assign(f.begin() + 2, f.end());
        rows.push_back(std::move(r));
    }
    return rows;
}

inline BigCount parse_count(const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw domain_error("csv: not a nonnegative integer: '" + s + "'");
    return BigCount(s);
}

}  // namespace permshape::csv
