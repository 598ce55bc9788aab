#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "pfde/common.hpp"

namespace pfde {

// Point on a k-torus moved by a constant translation flow. Periodic driving
// is one angle; quasi-periodic driving uses rationally independent
// frequencies (independence is assumed, not verified).
struct DriverState {
    std::vector<double> angles;       // in [0, 2*pi)
    std::vector<double> frequencies;  // radians per unit time

    std::size_t dim() const { return angles.size(); }
};

inline double wrap_angle(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    return a;
}

inline DriverState advance_driver(const DriverState& omega, double t) {
    DriverState out = omega;
    for (std::size_t i = 0; i < out.angles.size(); ++i)
        out.angles[i] = wrap_angle(out.angles[i] + out.frequencies[i] * t);
    return out;
}

// Distance on the circle, used by the flow-property tests.
inline double angle_distance(double a, double b) {
    double d = std::fabs(wrap_angle(a) - wrap_angle(b));
    return std::min(d, kTwoPi - d);
}

}  // namespace pfde
