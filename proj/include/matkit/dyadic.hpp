#pragma once

#include <cstdint>
#include <optional>

namespace matkit {

/// Exact dyadic rational num / 2^depth. Time arithmetic for sampled
/// semigroups stays in integers so that "is s + s' sampled" never hits a
/// rounding bug; only operator entries are floating point.
struct DyadicTime {
    std::int64_t num = 0;
    int depth = 0; // denominator exponent; normalized so num is odd or depth == 0

    static DyadicTime of(std::int64_t num, int depth);
    double value() const;

    DyadicTime operator+(const DyadicTime& o) const;
    bool operator==(const DyadicTime& o) const { return num == o.num && depth == o.depth; }
    bool operator<(const DyadicTime& o) const;
};

/// Nearest sample index k (1-based, time k/2^depth) if t is within a relative
/// 1e-9 snap of a sampled time in [1, count]; otherwise nullopt.
std::optional<std::int64_t> snap_to_sample(double t, int depth, std::int64_t count);

} // namespace matkit
