#include "pfde/problem.hpp"

#include <cmath>

namespace pfde {

std::string to_string(BoundaryKind k) {
    switch (k) {
        case BoundaryKind::Dirichlet: return "dirichlet";
        case BoundaryKind::Neumann: return "neumann";
        case BoundaryKind::Robin: return "robin";
    }
    return "?";
}

void ProblemSpec::validate() {
    if (n < 1) throw ConfigError("species count must be >= 1");
    if (diffusion.size() != static_cast<std::size_t>(n))
        throw ConfigError("diffusion coefficient count != species count");
    for (double d : diffusion)
        if (!(d > 0.0)) throw ConfigError("diffusion coefficients must be strictly positive");
    if (mesh.intervals < 8) throw ConfigError("mesh must have at least 8 intervals");
    if (delay_steps < 4) throw ConfigError("delay_steps must be >= 4");
    if (boundary.species.size() != static_cast<std::size_t>(n))
        throw ConfigError("boundary spec count != species count");
    boundary.validate();
    if (reaction.n != n) throw ConfigError("reaction dimension != species count");
    if (driver.angles.size() != driver.frequencies.size())
        throw ConfigError("driver angles and frequencies must have equal length");
    reaction.validate(driver.dim());
    reaction.quasimonotone = quasimonotone_margin(*this, -2.0, 2.0, 4096, 0x9d2c5680u) >= -1e-12;
}

void ProblemSpec::require_admissible(const Segment& phi) const {
    if (phi.species() != n || phi.nodes() != nodes() || phi.delay_steps() != delay_steps)
        throw ConfigError("segment shape does not match problem discretization");
    for (int i = 0; i < n; ++i) {
        if (boundary.species[i].kind != BoundaryKind::Dirichlet) continue;
        for (int m = 0; m <= delay_steps; ++m) {
            if (std::fabs(phi.at(m, i, 0)) > 1e-14 ||
                std::fabs(phi.at(m, i, nodes() - 1)) > 1e-14)
                throw ConfigError("initial segment violates Dirichlet compatibility (species " +
                                  std::to_string(i) + " nonzero at boundary)");
        }
    }
    for (double v : phi.raw())
        if (!std::isfinite(v)) throw ConfigError("initial segment has non-finite values");
}

Segment ProblemSpec::make_initial_segment(double value, InitialShape shape) const {
    Segment phi(n, nodes(), delay_steps);
    const double l = mesh.length;
    for (int i = 0; i < n; ++i) {
        InitialShape s = shape;
        if (s == InitialShape::Auto)
            s = boundary.species[i].kind == BoundaryKind::Dirichlet ? InitialShape::Sine
                                                                    : InitialShape::Constant;
        for (int j = 0; j < nodes(); ++j) {
            const double x = mesh.x(j);
            double g = 1.0;
            switch (s) {
                case InitialShape::Constant: g = 1.0; break;
                case InitialShape::Sine: g = std::sin(M_PI * x / l); break;
                case InitialShape::Bump: {
                    double u = x / l;
                    g = u * u * (1.0 - u) * (1.0 - u) * 16.0;
                    break;
                }
                case InitialShape::Auto: break;
            }
            for (int m = 0; m <= delay_steps; ++m) phi.at(m, i, j) = value * g;
        }
        if (boundary.species[i].kind == BoundaryKind::Dirichlet)
            for (int m = 0; m <= delay_steps; ++m) {
                phi.at(m, i, 0) = 0.0;
                phi.at(m, i, nodes() - 1) = 0.0;
            }
    }
    return phi;
}

double quasimonotone_margin(const ProblemSpec& p, double box_lo, double box_hi, int samples,
                            std::uint64_t seed) {
    Rng rng(seed);
    const int n = p.n;
    std::vector<double> y(n), yd(n), dy(n * n), dyd(n * n);
    DriverState omega = p.driver;
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        for (auto& ang : omega.angles) ang = rng.uniform(0.0, kTwoPi);
        double x = rng.uniform(0.0, p.mesh.length);
        for (int i = 0; i < n; ++i) {
            y[i] = rng.uniform(box_lo, box_hi);
            yd[i] = rng.uniform(box_lo, box_hi);
        }
        p.reaction.jacobians(omega, x, y.data(), yd.data(), dy.data(), dyd.data());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i != j) worst = std::min(worst, dy[i * n + j]);
                worst = std::min(worst, dyd[i * n + j]);
            }
    }
    return worst;
}

}  // namespace pfde
