#pragma once

#include <algorithm>
#include <cmath>

namespace pxvi {

/// Two-sided truncation at level k >= 0: min(k, max(-k, t)).
inline double truncate(double t, double k) {
    return std::min(k, std::max(-k, t));
}

/// Unit excess over level k: the part of t beyond +-k, clipped to [-1, 1].
/// Equals truncate(t - truncate(t, k), 1); vanishes exactly on |t| <= k and
/// saturates once |t| >= k + 1.
inline double unit_excess(double t, double k) {
    return truncate(t - truncate(t, k), 1.0);
}

} // namespace pxvi
