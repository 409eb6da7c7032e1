#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace cpbpv {

using i64 = std::int64_t;

struct SourcePos {
    int line = 0;  // 1-based, 0 = unknown
    int col = 0;
};

inline std::string to_string(const SourcePos& p) {
    return std::to_string(p.line) + ":" + std::to_string(p.col);
}

/// Error in the source program text (lexical, syntactic, or name/kind resolution).
class ParseError : public std::runtime_error {
public:
    ParseError(SourcePos pos, const std::string& msg)
        : std::runtime_error(to_string(pos) + ": " + msg), pos(pos) {}
    SourcePos pos;
};

/// Error raised while setting up or running a verification (bad bindings,
/// missing contract, non-concrete quantifier range, ...).
class VerifyError : public std::runtime_error {
public:
    explicit VerifyError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A solver or executor budget was exhausted. Distinguished from any verdict.
class ResourceLimitError : public std::runtime_error {
public:
    explicit ResourceLimitError(const std::string& msg) : std::runtime_error(msg) {}
};

// ---- bit-width bounds ----

inline i64 min_value(int bits) { return -(i64{1} << (bits - 1)); }
inline i64 max_value(int bits) { return (i64{1} << (bits - 1)) - 1; }

inline bool fits(i64 v, int bits) { return v >= min_value(bits) && v <= max_value(bits); }

// ---- exact checked arithmetic (used by constant folding and evaluation) ----

inline std::optional<i64> checked_add(i64 a, i64 b) {
    i64 r;
    if (__builtin_add_overflow(a, b, &r)) return std::nullopt;
    return r;
}

inline std::optional<i64> checked_sub(i64 a, i64 b) {
    i64 r;
    if (__builtin_sub_overflow(a, b, &r)) return std::nullopt;
    return r;
}

inline std::optional<i64> checked_mul(i64 a, i64 b) {
    i64 r;
    if (__builtin_mul_overflow(a, b, &r)) return std::nullopt;
    return r;
}

/// Truncation-toward-zero division; nullopt on zero divisor or INT64_MIN / -1.
inline std::optional<i64> checked_div(i64 a, i64 b) {
    if (b == 0) return std::nullopt;
    if (a == std::numeric_limits<i64>::min() && b == -1) return std::nullopt;
    return a / b;  // C++ integer division truncates toward zero
}

// ---- saturating interval arithmetic ----
// Interval endpoints are clamped to +/-kInf so products of in-range endpoints
// cannot overflow i64.

inline constexpr i64 kInf = i64{1} << 62;

inline i64 sat_clamp(i64 v) { return v > kInf ? kInf : (v < -kInf ? -kInf : v); }

inline i64 sat_add(i64 a, i64 b) {
    i64 r;
    if (__builtin_add_overflow(a, b, &r)) return a > 0 ? kInf : -kInf;
    return sat_clamp(r);
}

inline i64 sat_sub(i64 a, i64 b) {
    i64 r;
    if (__builtin_sub_overflow(a, b, &r)) return a > 0 || b < 0 ? kInf : -kInf;
    return sat_clamp(r);
}

inline i64 sat_mul(i64 a, i64 b) {
    i64 r;
    if (__builtin_mul_overflow(a, b, &r)) return (a > 0) == (b > 0) ? kInf : -kInf;
    return sat_clamp(r);
}

}  // namespace cpbpv
