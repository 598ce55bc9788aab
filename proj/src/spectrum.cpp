#include "pfde/spectrum.hpp"

#include <algorithm>
#include <cmath>

namespace pfde {

namespace {

// Least-squares slope of y against t over [first, last]; also RMS residual.
struct Fit {
    double slope = 0.0;
    double rms = 0.0;
};

Fit fit_slope(const std::vector<double>& t, const std::vector<double>& y, std::size_t first,
              std::size_t last) {
    const double n = static_cast<double>(last - first + 1);
    double mt = 0.0, my = 0.0;
    for (std::size_t i = first; i <= last; ++i) {
        mt += t[i];
        my += y[i];
    }
    mt /= n;
    my /= n;
    double stt = 0.0, sty = 0.0;
    for (std::size_t i = first; i <= last; ++i) {
        stt += (t[i] - mt) * (t[i] - mt);
        sty += (t[i] - mt) * (y[i] - my);
    }
    Fit f;
    f.slope = sty / stt;
    double intercept = my - f.slope * mt;
    double ss = 0.0;
    for (std::size_t i = first; i <= last; ++i) {
        double r = y[i] - (intercept + f.slope * t[i]);
        ss += r * r;
    }
    f.rms = std::sqrt(ss / n);
    return f;
}

}  // namespace

double lyapunov_exponent(const CoefficientPath& path, const Segment& psi0,
                         const LyapunovParams& params, LyapunovDiagnostics* diag) {
    const ProblemSpec& bp = path.block_problem();
    const double h = bp.h();
    if (params.T < 10.0 * params.window - 1e-12)
        throw std::invalid_argument("lyapunov_exponent requires T >= 10 * window");
    const int steps = static_cast<int>(std::llround(params.T / h));
    if (steps > path.steps()) throw ConfigError("lyapunov horizon exceeds the coefficient path");

    // principal direction: strictly positive at interior nodes
    for (int i = 0; i < bp.n; ++i)
        for (int m = 0; m <= bp.delay_steps; ++m)
            for (int j = 1; j < bp.nodes() - 1; ++j)
                if (psi0.at(m, i, j) <= 0.0)
                    throw std::invalid_argument(
                        "lyapunov_exponent: psi0 must be strictly positive at interior nodes");

    VariationalStepper st(path, psi0);
    double acc = 0.0;
    std::vector<double> ts, ys;
    ts.reserve(steps + 1);
    ys.reserve(steps + 1);
    LyapunovDiagnostics d;

    auto norm_now = [&]() {
        return params.newest_profile_norm ? st.newest_norm() : st.window_norm();
    };

    double nrm = norm_now();
    ts.push_back(0.0);
    ys.push_back(acc + std::log(nrm));
    for (int m = 1; m <= steps; ++m) {
        st.step();
        nrm = norm_now();
        if (nrm == 0.0 || !std::isfinite(nrm)) {
            d.degenerate = true;
            if (diag) *diag = d;
            return neg_infinity();
        }
        if (nrm < params.renorm_lo || nrm > params.renorm_hi) {
            st.scale(1.0 / nrm);
            acc += std::log(nrm);
            nrm = 1.0;
            ++d.renormalizations;
        }
        ts.push_back(m * h);
        ys.push_back(acc + std::log(nrm));
    }

    const std::size_t last = ts.size() - 1;
    const std::size_t win_steps = static_cast<std::size_t>(std::llround(params.window / h));
    Fit final_fit = fit_slope(ts, ys, last - win_steps, last);
    d.residual = final_fit.rms;

    // sliding windows over the second half, quarter-window stride
    double mn = final_fit.slope, mx = final_fit.slope;
    const std::size_t stride = std::max<std::size_t>(1, win_steps / 4);
    for (std::size_t start = last / 2; start + win_steps <= last; start += stride) {
        Fit f = fit_slope(ts, ys, start, start + win_steps);
        mn = std::min(mn, f.slope);
        mx = std::max(mx, f.slope);
    }
    d.window_min_slope = mn;
    d.window_max_slope = mx;
    if (diag) *diag = d;
    return final_fit.slope;
}

SampledK sample_K(ProblemPtr p, const KSampler& sampler, double lyapunov_horizon) {
    SampledK K;
    K.problem = p;
    K.mode = sampler.mode;
    K.lyapunov_horizon = lyapunov_horizon;
    if (sampler.mode == KSampler::Mode::ZeroSection) {
        // verify f(omega, x, 0, 0) = 0 on the grid
        const std::size_t kdim = p->driver.dim();
        std::vector<DriverState> grid;
        const int per = std::max(1, sampler.grid_per_angle);
        std::size_t total = 1;
        for (std::size_t i = 0; i < kdim; ++i) total *= per;
        grid.reserve(total);
        for (std::size_t g = 0; g < total; ++g) {
            DriverState w = p->driver;
            std::size_t rest = g;
            for (std::size_t i = 0; i < kdim; ++i) {
                w.angles[i] = (kTwoPi * (rest % per)) / per;
                rest /= per;
            }
            grid.push_back(w);
        }
        std::vector<double> zero(p->n, 0.0), f(p->n);
        for (std::size_t g = 0; g < grid.size(); ++g) {
            for (int j = 0; j < p->nodes(); ++j) {
                p->reaction.eval(grid[g], p->mesh.x(j), zero.data(), zero.data(), f.data());
                for (int i = 0; i < p->n; ++i)
                    if (std::fabs(f[i]) > 1e-12)
                        throw ZeroSectionError(
                            "zero-section sampling requires f(omega, x, 0, 0) = 0; found " +
                            std::to_string(f[i]) + " for species " + std::to_string(i));
            }
        }
        K.grid = std::move(grid);
    } else {
        const double horizon =
            sampler.t_skip + (sampler.sample_count - 1) * sampler.sample_spacing + lyapunov_horizon;
        IntegrateOptions opts;
        opts.throw_on_blowup = true;
        Trajectory orbit = integrate(p, p->driver, sampler.seed_phi, horizon, {}, opts);
        K.orbit = std::make_shared<Trajectory>(std::move(orbit));
        for (int s = 0; s < sampler.sample_count; ++s)
            K.sample_times.push_back(sampler.t_skip + s * sampler.sample_spacing);
    }
    return K;
}

CoefficientPath sample_path(const SampledK& K, int id, const std::vector<int>& block, double T) {
    const ProblemSpec& p = *K.problem;
    if (K.mode == KSampler::Mode::ZeroSection) {
        // orbit through (omega, 0) is identically zero
        IntegrateOptions opts;
        opts.throw_on_blowup = true;
        Trajectory zero = integrate(K.problem, K.grid[id], p.zero_segment(), T, {}, opts);
        return linearize_along(zero, block, 0.0, T);
    }
    return linearize_along(*K.orbit, block, K.sample_times[id], T);
}

SpectrumEstimate principal_spectrum(const SampledK& K, const std::vector<int>& block,
                                    const LyapunovParams& params) {
    SpectrumEstimate est;
    est.species = block;
    if (est.species.empty())
        for (int i = 0; i < K.problem->n; ++i) est.species.push_back(i);

    const int count = K.count();
    if (count == 0) throw ConfigError("principal_spectrum: empty sample set");
    est.samples.resize(count);

#pragma omp parallel for schedule(dynamic, 1)
    for (int s = 0; s < count; ++s) {
        CoefficientPath path = sample_path(K, s, est.species, params.T);
        Segment psi0 = path.block_problem().make_initial_segment(1.0);
        LyapunovDiagnostics diag;
        double lambda = lyapunov_exponent(path, psi0, params, &diag);
        est.samples[s] = {s, lambda, diag.residual, diag.window_min_slope, diag.window_max_slope,
                          diag.degenerate};
    }

    est.lower = est.samples[0].lambda;
    est.upper = est.samples[0].lambda;
    for (const SampleExponent& se : est.samples) {
        est.lower = std::min(est.lower, se.lambda);
        est.upper = std::max(est.upper, se.lambda);
    }
    return est;
}

SpectrumEstimate principal_spectrum(ProblemPtr p, const KSampler& sampler,
                                    const std::vector<int>& block, const LyapunovParams& params) {
    SampledK K = sample_K(std::move(p), sampler, params.T);
    return principal_spectrum(K, block, params);
}

double characteristic_root(double a, double b, double dmu) {
    if (b < 0.0) throw std::invalid_argument("characteristic_root requires b >= 0");
    double lam = a - dmu + b;  // above the root: g is increasing, g(lam) >= 0 here
    for (int it = 0; it < 200; ++it) {
        double ex = std::exp(-lam);
        double g = lam + dmu - a - b * ex;
        double gp = 1.0 + b * ex;
        double next = lam - g / gp;
        if (std::fabs(next - lam) <= 1e-10 * std::max(1.0, std::fabs(next))) return next;
        lam = next;
    }
    throw std::runtime_error("characteristic_root: Newton iteration did not converge");
}

}  // namespace pfde
