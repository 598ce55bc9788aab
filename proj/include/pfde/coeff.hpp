#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "pfde/driver.hpp"

namespace pfde {

// One term of a coefficient table:
//   amp * cos(modes . theta + phase) * (p0 + p1 x + p2 x^2 + p3 x^3 + p4 x^4).
// A sin term is a cos term with phase -pi/2. modes.size() must equal the
// driver dimension (checked at ingestion, not here).
struct CoeffTerm {
    double amp = 0.0;
    double phase = 0.0;
    std::vector<int> modes;
    std::array<double, 5> poly{0, 0, 0, 0, 0};
};

// Finite Fourier sum in the driver angles times a polynomial in x. The empty
// table is the zero coefficient.
struct CoeffTable {
    std::vector<CoeffTerm> terms;

    bool empty() const { return terms.empty(); }

    double eval(const DriverState& omega, double x) const {
        double v = 0.0;
        for (const CoeffTerm& t : terms) {
            double arg = t.phase;
            for (std::size_t j = 0; j < t.modes.size(); ++j)
                arg += t.modes[j] * omega.angles[j];
            double p = t.poly[4];
            for (int d = 3; d >= 0; --d) p = p * x + t.poly[d];
            v += t.amp * std::cos(arg) * p;
        }
        return v;
    }

    static CoeffTable constant(double c, std::size_t driver_dim) {
        CoeffTable tab;
        CoeffTerm t;
        t.amp = c;
        t.modes.assign(driver_dim, 0);
        t.poly = {1, 0, 0, 0, 0};
        tab.terms.push_back(t);
        return tab;
    }
};

}  // namespace pfde
