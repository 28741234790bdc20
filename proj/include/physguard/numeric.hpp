// Small shared numeric helpers.
#pragma once

#include <cmath>
#include <cstddef>
#include <span>

#include "physguard/errors.hpp"

namespace physguard::numeric {

inline double mean(std::span<const double> xs) {
    if (xs.empty()) throw InsufficientData("mean: empty sample");
    double acc = 0.0;
    for (double x : xs) acc += x;
    return acc / static_cast<double>(xs.size());
}

// Unbiased sample variance (divisor n - 1).
inline double variance(std::span<const double> xs, double sample_mean) {
    if (xs.size() < 2) throw InsufficientData("variance: need at least 2 samples");
    double acc = 0.0;
    for (double x : xs) {
        const double d = x - sample_mean;
        acc += d * d;
    }
    return acc / static_cast<double>(xs.size() - 1);
}

inline double variance(std::span<const double> xs) { return variance(xs, mean(xs)); }

// Quantile of an ascending-sorted sample with linear interpolation between
// order statistics: position q * (n - 1), fractional part interpolated.
inline double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw InsufficientData("quantile_sorted: empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw InvalidParameter("quantile_sorted: q must lie in [0, 1]");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace physguard::numeric
