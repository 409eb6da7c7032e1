#pragma once

#include <algorithm>

#include "cpbpv/base.hpp"

namespace cpbpv {

/// Closed integer interval with saturating endpoints; empty iff lo > hi.
struct Interval {
    i64 lo = -kInf;
    i64 hi = kInf;

    bool empty() const { return lo > hi; }
    bool fixed() const { return lo == hi; }
    bool contains(i64 v) const { return v >= lo && v <= hi; }

    static Interval point(i64 v) { return {v, v}; }
    static Interval full() { return {-kInf, kInf}; }
    static Interval none() { return {1, 0}; }
};

inline Interval meet(Interval a, Interval b) {
    return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

inline Interval join(Interval a, Interval b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

inline Interval iv_add(Interval a, Interval b) {
    if (a.empty() || b.empty()) return Interval::none();
    return {sat_add(a.lo, b.lo), sat_add(a.hi, b.hi)};
}

inline Interval iv_sub(Interval a, Interval b) {
    if (a.empty() || b.empty()) return Interval::none();
    return {sat_sub(a.lo, b.hi), sat_sub(a.hi, b.lo)};
}

inline Interval iv_mul(Interval a, Interval b) {
    if (a.empty() || b.empty()) return Interval::none();
    i64 c1 = sat_mul(a.lo, b.lo), c2 = sat_mul(a.lo, b.hi);
    i64 c3 = sat_mul(a.hi, b.lo), c4 = sat_mul(a.hi, b.hi);
    return {std::min(std::min(c1, c2), std::min(c3, c4)),
            std::max(std::max(c1, c2), std::max(c3, c4))};
}

/// Truncation-toward-zero division hull, with zero excluded from the divisor
/// (division by zero has no supported value). Empty if the divisor is only 0.
inline Interval iv_div(Interval a, Interval b) {
    if (a.empty() || b.empty()) return Interval::none();
    if (b.lo == 0 && b.hi == 0) return Interval::none();
    Interval out = Interval::none();
    auto consider = [&](i64 x, i64 y) {
        if (y == 0) return;
        out = join(out, Interval::point(sat_clamp(x) / sat_clamp(y)));
    };
    // extreme quotients occur at endpoint numerators and at divisor values
    // closest to zero (endpoints and +/-1 when inside the divisor range)
    i64 ys[4];
    int n = 0;
    ys[n++] = b.lo != 0 ? b.lo : 1;
    ys[n++] = b.hi != 0 ? b.hi : -1;
    if (b.lo <= 1 && 1 <= b.hi) ys[n++] = 1;
    if (b.lo <= -1 && -1 <= b.hi) ys[n++] = -1;
    for (int i = 0; i < n; ++i) {
        consider(a.lo, ys[i]);
        consider(a.hi, ys[i]);
        if (a.lo <= 0 && 0 <= a.hi) consider(0, ys[i]);
    }
    return out;
}

// floor/ceil division helpers for bound projection
inline i64 div_floor(i64 a, i64 b) {  // b != 0
    i64 q = a / b, r = a % b;
    return r != 0 && ((r < 0) != (b < 0)) ? q - 1 : q;
}

inline i64 div_ceil(i64 a, i64 b) {  // b != 0
    i64 q = a / b, r = a % b;
    return r != 0 && ((r < 0) == (b < 0)) ? q + 1 : q;
}

}  // namespace cpbpv
