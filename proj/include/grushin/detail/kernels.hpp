#pragma once

#include <cmath>

// Scalar kernels shared by the exponential map, its Jacobian and the Newton
// inversion. Each kernel has a removable singularity at z = 0; the closed
// form loses precision there (the numerator cancels to O(z^3)), so below
// |z| < kSeriesThreshold we evaluate a degree-8 Taylor polynomial instead.
// At the threshold both branches agree to ~1e-13 relative.

namespace grushin::detail {

inline constexpr double kSeriesThreshold = 0.1;

// sin(z)/z
inline double sinc_closed(double z) { return std::sin(z) / z; }
inline double sinc_series(double z) {
    const double z2 = z * z;
    return 1.0 + z2 * (-1.0 / 6.0 + z2 * (1.0 / 120.0 + z2 * (-1.0 / 5040.0 + z2 / 362880.0)));
}
inline double sinc(double z) {
    return std::abs(z) < kSeriesThreshold ? sinc_series(z) : sinc_closed(z);
}

// (z - sin z)/z^2
inline double g1_closed(double z) { return (z - std::sin(z)) / (z * z); }
inline double g1_series(double z) {
    const double z2 = z * z;
    return z * (1.0 / 6.0 + z2 * (-1.0 / 120.0 + z2 * (1.0 / 5040.0 - z2 / 362880.0)));
}
inline double g1(double z) {
    return std::abs(z) < kSeriesThreshold ? g1_series(z) : g1_closed(z);
}

// (1 - cos z)/z
inline double g2_closed(double z) { return (1.0 - std::cos(z)) / z; }
inline double g2_series(double z) {
    const double z2 = z * z;
    return z * (0.5 + z2 * (-1.0 / 24.0 + z2 * (1.0 / 720.0 - z2 / 40320.0)));
}
inline double g2(double z) {
    return std::abs(z) < kSeriesThreshold ? g2_series(z) : g2_closed(z);
}

// (sin z - z cos z)/z^3
inline double g3_closed(double z) { return (std::sin(z) - z * std::cos(z)) / (z * z * z); }
inline double g3_series(double z) {
    const double z2 = z * z;
    return 1.0 / 3.0 + z2 * (-1.0 / 30.0 + z2 * (1.0 / 840.0 - z2 / 45360.0));
}
inline double g3(double z) {
    return std::abs(z) < kSeriesThreshold ? g3_series(z) : g3_closed(z);
}

// d/dz (z - sin z)/z^2  =  (z(1 - cos z) - 2(z - sin z))/z^3
inline double g1p_closed(double z) {
    return (z * (1.0 - std::cos(z)) - 2.0 * (z - std::sin(z))) / (z * z * z);
}
inline double g1p_series(double z) {
    const double z2 = z * z;
    return 1.0 / 6.0 + z2 * (-1.0 / 40.0 + z2 * (1.0 / 1008.0 - z2 / 51840.0));
}
inline double g1p(double z) {
    return std::abs(z) < kSeriesThreshold ? g1p_series(z) : g1p_closed(z);
}

// d/dz (1 - cos z)/z  =  (z sin z - 1 + cos z)/z^2
inline double g2p_closed(double z) {
    return (z * std::sin(z) - 1.0 + std::cos(z)) / (z * z);
}
inline double g2p_series(double z) {
    const double z2 = z * z;
    return 0.5 + z2 * (-1.0 / 8.0 + z2 * (1.0 / 144.0 - z2 / 5760.0));
}
inline double g2p(double z) {
    return std::abs(z) < kSeriesThreshold ? g2p_series(z) : g2p_closed(z);
}

}  // namespace grushin::detail
