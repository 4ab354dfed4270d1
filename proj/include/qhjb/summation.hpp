#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace qhjb {

/// Pairwise sum over a fixed-order array. The reduction tree depends only on
/// the array length, so totals are independent of how the entries were
/// produced (thread count, chunk scheduling).
inline double pairwise_sum(std::span<const double> xs) {
    if (xs.size() <= 8) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

struct MeanStderr {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Two-pass mean and standard error (sample std / sqrt(n)).
inline MeanStderr mean_stderr(std::span<const double> xs) {
    MeanStderr out;
    const std::size_t n = xs.size();
    if (n == 0) return out;
    out.mean = pairwise_sum(xs) / static_cast<double>(n);
    if (n == 1) return out;
    double ss = 0.0;
    for (double x : xs) {
        const double d = x - out.mean;
        ss += d * d;
    }
    out.std_error = std::sqrt(ss / (static_cast<double>(n) - 1.0)) /
                    std::sqrt(static_cast<double>(n));
    return out;
}

} // namespace qhjb
