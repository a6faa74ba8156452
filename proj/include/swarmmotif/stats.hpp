#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace swarmmotif {

/// Linear interpolation between closest ranks (q in [0, 1]) of sorted data.
inline double percentile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("percentile of empty data");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

struct Spread {
    double min = 0.0;
    double p05 = 0.0;
    double p50 = 0.0;
    double p95 = 0.0;
    double max = 0.0;
};

inline Spread spread(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("spread of empty data");
    std::sort(values.begin(), values.end());
    return {values.front(), percentile_sorted(values, 0.05), percentile_sorted(values, 0.50),
            percentile_sorted(values, 0.95), values.back()};
}

}  // namespace swarmmotif
