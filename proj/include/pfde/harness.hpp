#pragma once

#include <vector>

#include "pfde/solver.hpp"

namespace pfde {

// Sampling box in (y, yd) space, one interval per species for each of the
// two arguments.
struct SampleBox {
    std::vector<double> y_lo, y_hi, yd_lo, yd_hi;

    static SampleBox uniform(int n, double lo, double hi) {
        SampleBox b;
        b.y_lo.assign(n, lo);
        b.y_hi.assign(n, hi);
        b.yd_lo.assign(n, lo);
        b.yd_hi.assign(n, hi);
        return b;
    }
};

struct QuasimonotoneReport {
    bool pass = true;
    double worst = 0.0;  // most negative constrained Jacobian entry found
    // witness point of the worst violation
    std::vector<double> witness_angles, witness_y, witness_yd;
    double witness_x = 0.0;
    int witness_i = -1, witness_j = -1;
    bool witness_delayed = false;
    int samples = 0;
};

// Samples (omega, x, y, yd) in the box and asserts the (C4) sign conditions
// on off-diagonal D_y f entries and all D_yd f entries, margin -1e-12.
// Failing is a result, not an error.
QuasimonotoneReport check_quasimonotone(const ProblemSpec& p, int samples, const SampleBox& box,
                                        std::uint64_t seed);

// L = max over sampled points (box corners, a coarse grid and random interior
// points) of the row 1-norm of [D_y f, D_yd f]; realizes the Lipschitz
// constant of condition (C) on the box.
double lipschitz_bound(const ProblemSpec& p, const SampleBox& box, std::uint64_t seed = 1,
                       int random_samples = 512);

// Worst signed margin of z_i(t, omega, psi) - z_i(t, omega, phi)
//   - e^{-L t} e^{t A_i} (psi_i(0) - phi_i(0))
// over species, nodes and snapshot times.
struct ComparisonReport {
    int pair_id = 0;
    std::vector<double> times;
    double worst_margin = 0.0;
    double tolerance = 0.0;
    double lipschitz = 0.0;
    SampleBox box;  // trajectory bounding box used for L, inflated 10%
    bool pass = false;
};

ComparisonReport check_comparison(ProblemPtr p, const DriverState& omega, const Segment& phi,
                                  const Segment& psi, double T, int pair_id = 0);

struct MonotonicityResult {
    int pair_id = 0;
    bool pass = true;
    double worst_violation = 0.0;  // max over entries of (lower - upper), should be <= 1e-8
    double time_of_worst = 0.0;
};

// Order preservation along trajectories of ordered pairs, margin 1e-8 at
// every snapshot.
std::vector<MonotonicityResult> check_monotonicity(ProblemPtr p,
                                                   const std::vector<std::pair<Segment, Segment>>& pairs,
                                                   double T);

// Random smooth admissible segment with values in [lo, hi] (Dirichlet species
// shaped to vanish at the boundary). Used by the property suites.
Segment random_segment(const ProblemSpec& p, Rng& rng, double lo, double hi);

// Ordered pair phi <= psi of random segments.
std::pair<Segment, Segment> random_ordered_pair(const ProblemSpec& p, Rng& rng, double lo,
                                                double hi);

}  // namespace pfde
