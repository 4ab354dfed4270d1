#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace qhjb {

/// Feedback law theta -> control value, plus a descriptor string that run
/// manifests record so a run can be reproduced from its manifest alone.
struct Policy {
    std::function<double(double)> control;
    std::string descriptor;

    double operator()(double theta) const { return control(theta); }
};

inline Policy constant_policy(double v) {
    return {[v](double) { return v; }, "const:" + std::to_string(v)};
}

/// Bang-bang law +omega on theta >= 0, -omega on theta < 0 (the tie at 0 is
/// broken toward +omega).
inline Policy sign_policy(double omega) {
    return {[omega](double theta) { return theta >= 0.0 ? omega : -omega; },
            "sign:" + std::to_string(omega)};
}

/// Nearest-node lookup into a nodal control table on [lo, hi].
inline Policy table_policy(std::vector<double> controls, double lo, double hi,
                           std::string descriptor) {
    const std::size_t n = controls.size();
    const double h = (hi - lo) / static_cast<double>(n - 1);
    return {[controls = std::move(controls), lo, hi, h, n](double theta) {
                if (theta <= lo) return controls.front();
                if (theta >= hi) return controls.back();
                const auto i = static_cast<std::size_t>((theta - lo) / h + 0.5);
                return controls[i < n ? i : n - 1];
            },
            std::move(descriptor)};
}

} // namespace qhjb
