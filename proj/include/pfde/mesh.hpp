#pragma once

#include <string>
#include <vector>

#include "pfde/common.hpp"

namespace pfde {

// Equispaced grid on [0, length] with N intervals, nodes x_0 = 0 .. x_N = length.
struct Mesh1D {
    double length = 0.0;
    int intervals = 0;  // N

    Mesh1D() = default;
    Mesh1D(double len, int n_intervals) : length(len), intervals(n_intervals) {
        if (len <= 0.0) throw ConfigError("mesh length must be positive");
        if (n_intervals < 8) throw ConfigError("mesh must have at least 8 intervals");
    }

    int nodes() const { return intervals + 1; }
    double dx() const { return length / intervals; }
    double x(int j) const { return j == intervals ? length : j * dx(); }
};

enum class BoundaryKind { Dirichlet, Neumann, Robin };

std::string to_string(BoundaryKind k);

// Per-species boundary closure. Robin stores alpha only at the two boundary
// nodes; that is the only place it enters the stencil.
struct SpeciesBoundary {
    BoundaryKind kind = BoundaryKind::Neumann;
    double robin_alpha_left = 0.0;
    double robin_alpha_right = 0.0;
};

struct BoundarySpec {
    std::vector<SpeciesBoundary> species;

    void validate() const {
        for (const SpeciesBoundary& b : species) {
            if (b.kind == BoundaryKind::Robin &&
                (b.robin_alpha_left < 0.0 || b.robin_alpha_right < 0.0))
                throw ConfigError("robin_alpha must be nonnegative");
        }
    }
};

}  // namespace pfde
