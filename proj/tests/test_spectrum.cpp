#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "pfde/harness.hpp"
#include "pfde/spectrum.hpp"

using namespace pfde;
using namespace pfde::test;

namespace {

double exponent_of(const ProblemSpec& spec, const LyapunovParams& params,
                   LyapunovDiagnostics* diag = nullptr) {
    ProblemPtr p = share(spec);
    IntegrateOptions opts;
    opts.throw_on_blowup = true;
    Trajectory tr = integrate(p, p->driver, p->zero_segment(), params.T, {}, opts);
    CoefficientPath path = linearize_along(tr);
    Segment psi0 = p->make_initial_segment(1.0);
    return lyapunov_exponent(path, psi0, params, diag);
}

}  // namespace

TEST_CASE("characteristic root oracle") {
    CHECK(characteristic_root(0.0, 0.0, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(characteristic_root(0.0, 1.0, 0.0) == doctest::Approx(0.5671432904).epsilon(1e-9));
    CHECK(characteristic_root(1.0, 0.0, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(characteristic_root(0.0, -1.0, 0.0), std::invalid_argument);
    // residual of the returned root
    double lam = characteristic_root(0.3, 0.7, 0.2);
    CHECK(std::fabs(lam + 0.2 - 0.3 - 0.7 * std::exp(-lam)) <= 1e-9);
}

TEST_CASE("pure Neumann diffusion has zero exponent") {
    LyapunovParams params;
    params.T = 60.0;
    params.window = 5.0;
    double lam = exponent_of(linear_scalar(0.0, 0.0, BoundaryKind::Neumann, 1.0, 16, 16), params);
    CHECK(std::fabs(lam) <= 1e-6);
}

TEST_CASE("Neumann linear growth rate") {
    LyapunovParams params;
    params.T = 60.0;
    params.window = 5.0;
    LyapunovDiagnostics diag;
    double lam = exponent_of(linear_scalar(0.5, 0.0, BoundaryKind::Neumann, 1.0, 16, 256), params,
                             &diag);
    CHECK(std::fabs(lam - 0.5) <= 1e-2);
    CHECK(diag.residual <= 1e-3);
    CHECK(diag.renormalizations > 0);
}

TEST_CASE("delayed coupling growth rate matches the characteristic root") {
    LyapunovParams params;
    params.T = 60.0;
    params.window = 5.0;
    double lam = exponent_of(linear_scalar(0.0, 1.0, BoundaryKind::Neumann, 1.0, 16, 256), params);
    CHECK(std::fabs(lam - 0.5671432904) <= 2e-2);
}

TEST_CASE("Dirichlet principal eigenvalue") {
    LyapunovParams params;
    params.T = 60.0;
    params.window = 5.0;
    double lam =
        exponent_of(linear_scalar(0.0, 0.0, BoundaryKind::Dirichlet, M_PI, 200, 256), params);
    CHECK(std::fabs(lam + 1.0) <= 5e-2);
}

TEST_CASE("scaling invariance of the exponent") {
    ProblemPtr p = share(linear_scalar(0.3, 0.2, BoundaryKind::Neumann, 1.0, 16, 64));
    IntegrateOptions opts;
    opts.throw_on_blowup = true;
    LyapunovParams params;
    params.T = 50.0;
    params.window = 5.0;
    Trajectory tr = integrate(p, p->driver, p->zero_segment(), params.T, {}, opts);
    CoefficientPath path = linearize_along(tr);
    Segment psi0 = p->make_initial_segment(1.0);
    double base = lyapunov_exponent(path, psi0, params);
    for (double c : {1e-3, 1e3}) {
        Segment scaled = psi0;
        for (double& v : scaled.raw()) v *= c;
        double lam = lyapunov_exponent(path, scaled, params);
        CHECK(std::fabs(lam - base) <= 1e-9);
    }
}

TEST_CASE("dominance of the strongly positive direction") {
    ProblemPtr p = share(linear_scalar(0.4, 0.1, BoundaryKind::Neumann, 1.0, 16, 64));
    IntegrateOptions opts;
    opts.throw_on_blowup = true;
    LyapunovParams params;
    params.T = 50.0;
    params.window = 5.0;
    Trajectory tr = integrate(p, p->driver, p->zero_segment(), params.T, {}, opts);
    CoefficientPath path = linearize_along(tr);
    double principal = lyapunov_exponent(path, p->make_initial_segment(1.0), params);
    Rng rng(41);
    for (int trial = 0; trial < 5; ++trial) {
        Segment psi = random_segment(*p, rng, 0.0, 1.0);
        for (double& v : psi.raw()) v += 1e-6;  // keep interior strictly positive
        double lam = lyapunov_exponent(path, psi, params);
        CHECK(lam <= principal + 1e-6);
    }
}

TEST_CASE("window-sup and newest-profile norms give the same exponent") {
    for (double a : {0.5, -0.3}) {
        ProblemPtr p = share(linear_scalar(a, 0.1, BoundaryKind::Neumann, 1.0, 16, 64));
        IntegrateOptions opts;
        opts.throw_on_blowup = true;
        LyapunovParams params;
        params.T = 50.0;
        params.window = 5.0;
        Trajectory tr = integrate(p, p->driver, p->zero_segment(), params.T, {}, opts);
        CoefficientPath path = linearize_along(tr);
        Segment psi0 = p->make_initial_segment(1.0);
        double win = lyapunov_exponent(path, psi0, params);
        params.newest_profile_norm = true;
        double newest = lyapunov_exponent(path, psi0, params);
        CHECK(std::fabs(win - newest) <= 1e-3);
    }
}

TEST_CASE("identically zero direction is rejected") {
    ProblemPtr p = share(linear_scalar(0.0, 0.0, BoundaryKind::Dirichlet, 1.0, 16, 16));
    IntegrateOptions opts;
    opts.throw_on_blowup = true;
    LyapunovParams params;
    params.T = 50.0;
    params.window = 5.0;
    Trajectory tr = integrate(p, p->driver, p->zero_segment(), params.T, {}, opts);
    CoefficientPath path = linearize_along(tr);
    Segment psi0 = p->make_initial_segment(1.0);
    // interior-positive but identically zero is inadmissible; zero out by hand
    for (double& v : psi0.raw()) v = 0.0;
    CHECK_THROWS_AS(lyapunov_exponent(path, psi0, params), std::invalid_argument);
}

TEST_CASE("precondition T >= 10 window") {
    ProblemPtr p = share(linear_scalar(0.0, 0.0));
    IntegrateOptions opts;
    Trajectory tr = integrate(p, p->driver, p->zero_segment(), 10.0);
    CoefficientPath path = linearize_along(tr);
    LyapunovParams params;
    params.T = 10.0;
    params.window = 5.0;
    CHECK_THROWS_AS(lyapunov_exponent(path, p->make_initial_segment(1.0), params),
                    std::invalid_argument);
}

TEST_CASE("zero-section sampler validates f(omega, x, 0, 0) = 0") {
    ProblemSpec spec = base_problem(1, 1.0, 16, 16);
    spec.reaction.catalog = Catalog::Custom;
    CustomTerm t;
    t.target = 0;
    t.coef = CoeffTable::constant(1.0, 1);  // constant source: f(0,0) = 1
    t.ypow = {0};
    t.dpow = {0};
    spec.reaction.terms.push_back(t);
    spec.validate();
    CHECK_THROWS_AS(sample_K(share(std::move(spec)), KSampler::zero_section(4), 10.0),
                    ZeroSectionError);
}

TEST_CASE("principal spectrum: constant coefficients agree across samples") {
    // driver present but coefficients mode-0: every grid sample sees the same path
    ProblemPtr p = share(delayed_logistic(1.0, 1.0, 1.0, 16, 64, 0.1));
    LyapunovParams params;
    params.T = 60.0;
    params.window = 5.0;
    SpectrumEstimate est = principal_spectrum(p, KSampler::zero_section(8), {}, params);
    CHECK(est.samples.size() == 8);
    CHECK(est.upper - est.lower <= 1e-3);
    // linearization at 0 is v' = d Lap v + v: exponent 1 under Neumann
    CHECK(est.lower == doctest::Approx(1.0).epsilon(2e-2));
    CHECK(est.upper == doctest::Approx(1.0).epsilon(2e-2));
}

TEST_CASE("periodically forced scalar: exponent is the time average") {
    // A(t) = a + c sin(theta_t), B = 0; the oscillation averages out
    const double a = 0.25, c = 0.3;
    ProblemSpec spec = base_problem(1, 1.0, 16, 64);
    spec.reaction.catalog = Catalog::Linear;
    spec.reaction.A.resize(1);
    spec.reaction.A[0].terms.push_back({a, 0.0, {0}, {1, 0, 0, 0, 0}});
    spec.reaction.A[0].terms.push_back({c, -M_PI_2, {1}, {1, 0, 0, 0, 0}});
    spec.validate();
    ProblemPtr p = share(std::move(spec));

    LyapunovParams params;
    params.T = 200.0;
    params.window = 20.0;
    SpectrumEstimate est = principal_spectrum(p, KSampler::zero_section(4), {}, params);
    for (const SampleExponent& se : est.samples) CHECK(std::fabs(se.lambda - a) <= 2e-2);
}

TEST_CASE("omega-limit sampling around the delayed logistic equilibrium") {
    // orbit settles at 1; linearization there is v' = d Lap v + (a - b) v - b v(t-1)
    // = v' = d Lap v - v(t-1), principal exponent = root of s = -e^{-s} (negative)
    ProblemPtr p = share(delayed_logistic(1.0, 1.0, 1.0, 16, 64, 0.1));
    KSampler sampler = KSampler::omega_limit(p->make_initial_segment(0.5), 50.0, 4, 2.0);
    LyapunovParams params;
    params.T = 50.0;
    params.window = 5.0;
    SpectrumEstimate est = principal_spectrum(p, sampler, {}, params);
    CHECK(est.lower <= 0.0);  // stable equilibrium: nonpositive principal exponent
    CHECK(est.upper <= 1e-2);
}
