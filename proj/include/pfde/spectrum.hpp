#pragma once

#include <vector>

#include "pfde/variational.hpp"

namespace pfde {

// Sampling strategy for the minimal set K. ZeroSection is K = Omega x {0}
// (requires f(omega, x, 0, 0) = 0) sampled on an equispaced grid of driver
// angles. OmegaLimit samples segments from a single orbit after a transient;
// minimality of the omega-limit set is an assumption recorded in reports, not
// verified.
struct KSampler {
    enum class Mode { ZeroSection, OmegaLimit };
    Mode mode = Mode::ZeroSection;

    // ZeroSection
    int grid_per_angle = 16;

    // OmegaLimit
    Segment seed_phi;
    double t_skip = 50.0;
    int sample_count = 8;
    double sample_spacing = 2.0;

    static KSampler zero_section(int grid = 16) {
        KSampler s;
        s.mode = Mode::ZeroSection;
        s.grid_per_angle = grid;
        return s;
    }
    static KSampler omega_limit(Segment seed, double skip = 50.0, int count = 8,
                                double spacing = 2.0) {
        KSampler s;
        s.mode = Mode::OmegaLimit;
        s.seed_phi = std::move(seed);
        s.t_skip = skip;
        s.sample_count = count;
        s.sample_spacing = spacing;
        return s;
    }
};

// Materialized samples of K: driver grid points (ZeroSection) or one stored
// orbit plus sample times (OmegaLimit). Built once and shared by the
// interaction matrix and the spectrum estimates.
struct SampledK {
    ProblemPtr problem;
    KSampler::Mode mode = KSampler::Mode::ZeroSection;
    std::vector<DriverState> grid;          // ZeroSection
    std::shared_ptr<Trajectory> orbit;      // OmegaLimit
    std::vector<double> sample_times;       // OmegaLimit
    // horizon available for per-sample linearizations
    double lyapunov_horizon = 0.0;

    int count() const {
        return mode == KSampler::Mode::ZeroSection ? static_cast<int>(grid.size())
                                                   : static_cast<int>(sample_times.size());
    }
};

// Builds the sample set; lyapunov_horizon tells OmegaLimit how far past the
// last sample the orbit must extend. Throws ZeroSectionError when zero-section
// sampling is requested but f(omega, x, 0, 0) != 0, and BlowupError if the
// seed orbit blows up.
SampledK sample_K(ProblemPtr p, const KSampler& sampler, double lyapunov_horizon);

// Coefficient path of the block linearization at sample `id` over the horizon.
CoefficientPath sample_path(const SampledK& K, int id, const std::vector<int>& block, double T);

struct LyapunovParams {
    double T = 60.0;
    double window = 5.0;
    double renorm_lo = 1e-6;
    double renorm_hi = 1e6;
    bool newest_profile_norm = false;  // use only the newest profile, not the window sup
};

struct LyapunovDiagnostics {
    double residual = 0.0;          // RMS residual of the final-window fit
    double window_min_slope = 0.0;  // min/max of sliding-window slopes over the
    double window_max_slope = 0.0;  // second half of the run
    int renormalizations = 0;
    bool degenerate = false;        // norm collapsed to zero; lambda = -inf
};

// Grows the linear flow from psi0 (strictly positive at interior nodes) with
// periodic renormalization and returns the slope of the accumulated log-norm
// over the final window. Requires T >= 10 * window and T <= path horizon.
double lyapunov_exponent(const CoefficientPath& path, const Segment& psi0,
                         const LyapunovParams& params, LyapunovDiagnostics* diag = nullptr);

struct SampleExponent {
    int sample_id = 0;
    double lambda = 0.0;
    double residual = 0.0;
    double window_min_slope = 0.0;
    double window_max_slope = 0.0;
    bool degenerate = false;
};

struct SpectrumEstimate {
    int block = 0;                  // block id, 0-based
    std::vector<int> species;       // original species indices of the block
    double lower = 0.0;             // min over samples of the per-sample exponent
    double upper = 0.0;             // max over samples
    std::vector<SampleExponent> samples;
};

// Per-sample block linearization + Lyapunov exponent, aggregated over K.
// Samples run concurrently; the fold is index-ordered and deterministic.
SpectrumEstimate principal_spectrum(const SampledK& K, const std::vector<int>& block,
                                    const LyapunovParams& params);
SpectrumEstimate principal_spectrum(ProblemPtr p, const KSampler& sampler,
                                    const std::vector<int>& block, const LyapunovParams& params);

// Unique real root of lambda = -d*mu + a + b e^{-lambda} (b >= 0) by Newton
// iteration, tolerance 1e-10. Test oracle for constant-coefficient scalar
// delay problems.
double characteristic_root(double a, double b, double dmu);

}  // namespace pfde
