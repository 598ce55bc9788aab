#pragma once

#include <memory>
#include <vector>

#include "pfde/driver.hpp"
#include "pfde/mesh.hpp"
#include "pfde/reaction.hpp"
#include "pfde/segment.hpp"

namespace pfde {

// Full description of one delayed reaction-diffusion family: mesh, diffusion
// coefficients, boundary closure, reaction entry, driver template and delay
// grid. Immutable after ingestion; shared across workers.
struct ProblemSpec {
    int n = 1;                       // species count
    std::vector<double> diffusion;   // d_i > 0
    Mesh1D mesh;
    BoundarySpec boundary;
    ReactionTerm reaction;
    DriverState driver;              // template: initial angles + frequencies
    int delay_steps = 64;            // M; time step h = 1/M

    double h() const { return 1.0 / delay_steps; }
    int nodes() const { return mesh.nodes(); }

    // Dimension/sign checks plus the structural quasimonotone audit (stored
    // in reaction.quasimonotone).
    void validate();

    // A segment is admissible when shapes match and Dirichlet species vanish
    // at boundary nodes in every stored profile.
    void require_admissible(const Segment& phi) const;

    Segment zero_segment() const { return Segment(n, nodes(), delay_steps); }

    // Constant-in-time initial data: value * shape(x) per species. Shape is
    // constant for Neumann/Robin species and sin(pi x / l) for Dirichlet ones
    // so the compatibility condition holds.
    enum class InitialShape { Auto, Constant, Sine, Bump };
    Segment make_initial_segment(double value, InitialShape shape = InitialShape::Auto) const;
};

using ProblemPtr = std::shared_ptr<const ProblemSpec>;

// Sign audit of the (C4) conditions on a y/yd sample box: returns the worst
// (most negative) sampled value among off-diagonal D_y f entries and all
// D_yd f entries. Deterministic for a fixed seed.
double quasimonotone_margin(const ProblemSpec& p, double box_lo, double box_hi,
                            int samples, std::uint64_t seed);

}  // namespace pfde
