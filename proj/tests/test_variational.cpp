#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "pfde/harness.hpp"
#include "pfde/variational.hpp"

using namespace pfde;
using namespace pfde::test;

TEST_CASE("linearize_along: constant path for linear reactions") {
    ProblemPtr p = share(linear_system({0.5, 0.3, 0.1, -0.2}, {0.0, 0.4, 0.2, 0.0}, 2));
    Trajectory tr = integrate(p, p->driver, p->make_initial_segment(0.3), 2.0);
    CoefficientPath path = linearize_along(tr);
    CHECK(path.steps() == 2 * p->delay_steps);
    for (int m : {0, 7, path.steps() - 1}) {
        const double* A = path.A_at(m);
        const double* B = path.B_at(m);
        for (int j = 0; j < path.nodes(); ++j) {
            CHECK(A[j * 4 + 0] == doctest::Approx(0.5));
            CHECK(A[j * 4 + 1] == doctest::Approx(0.3));
            CHECK(A[j * 4 + 2] == doctest::Approx(0.1));
            CHECK(A[j * 4 + 3] == doctest::Approx(-0.2));
            CHECK(B[j * 4 + 1] == doctest::Approx(0.4));
            CHECK(B[j * 4 + 2] == doctest::Approx(0.2));
        }
    }
}

TEST_CASE("linearize_along: delayed logistic at 0 and at the equilibrium slice") {
    ProblemPtr p = share(delayed_logistic(1.0, 1.0));
    Trajectory zero = integrate(p, p->driver, p->zero_segment(), 1.0);
    CoefficientPath at0 = linearize_along(zero);
    CHECK(at0.A_at(0)[0] == doctest::Approx(1.0));
    CHECK(at0.B_at(0)[0] == doctest::Approx(0.0));

    Trajectory half = integrate(p, p->driver, p->make_initial_segment(0.5), 1.0);
    CoefficientPath athalf = linearize_along(half);
    CHECK(athalf.A_at(0)[0] == doctest::Approx(1.0 - 0.5));   // a - b*zd
    CHECK(athalf.B_at(0)[0] == doctest::Approx(-0.5));        // -b*z
}

TEST_CASE("block restriction picks the right rows and columns") {
    ProblemPtr p = share(linear_system({0.5, 0.3, 0.0, 0.4, 0.5, 0.0, 0.2, 0.0, -1.0}, {}, 3));
    Trajectory tr = integrate(p, p->driver, p->zero_segment(), 1.0);
    CoefficientPath path = linearize_along(tr, {0, 1});
    CHECK(path.block_size() == 2);
    const double* A = path.A_at(0);
    CHECK(A[0] == doctest::Approx(0.5));
    CHECK(A[1] == doctest::Approx(0.3));
    CHECK(A[2] == doctest::Approx(0.4));
    CHECK(A[3] == doctest::Approx(0.5));
    CoefficientPath third = linearize_along(tr, {2});
    CHECK(third.A_at(0)[0] == doctest::Approx(-1.0));
    CHECK(third.block_problem().diffusion[0] == p->diffusion[2]);
}

TEST_CASE("variational integration is linear: zero and superposition") {
    ProblemPtr p = share(delayed_logistic(1.0, 1.0));
    Trajectory tr = integrate(p, p->driver, p->make_initial_segment(0.5), 2.0);
    CoefficientPath path = linearize_along(tr);

    Trajectory vz = integrate_variational(path, p->zero_segment(), 2.0);
    CHECK(segment_norm(segment_at(vz, 2.0)) == 0.0);

    Rng rng(23);
    Segment psi1 = random_segment(*p, rng, -1.0, 1.0);
    Segment psi2 = random_segment(*p, rng, -1.0, 1.0);
    const double a = 0.7, b = -1.3;
    Segment combo = psi1;
    for (std::size_t k = 0; k < combo.raw().size(); ++k)
        combo.raw()[k] = a * psi1.raw()[k] + b * psi2.raw()[k];

    Segment v1 = segment_at(integrate_variational(path, psi1, 2.0), 2.0);
    Segment v2 = segment_at(integrate_variational(path, psi2, 2.0), 2.0);
    Segment vc = segment_at(integrate_variational(path, combo, 2.0), 2.0);
    double worst = 0.0;
    for (std::size_t k = 0; k < vc.raw().size(); ++k)
        worst = std::max(worst, std::fabs(vc.raw()[k] - (a * v1.raw()[k] + b * v2.raw()[k])));
    CHECK(worst <= 1e-12);
}

TEST_CASE("scalar exponential oracle") {
    // A = a constant, B = 0, Neumann: v(t) = e^{a t} for constant data
    const double a = 0.1;
    ProblemPtr p = share(linear_scalar(a, 0.0, BoundaryKind::Neumann, 1.0, 32, 256));
    Trajectory tr = integrate(p, p->driver, p->zero_segment(), 1.0);
    CoefficientPath path = linearize_along(tr);
    Segment one = p->make_initial_segment(1.0);
    Trajectory v = integrate_variational(path, one, 1.0);
    auto prof = v.profile_at(1.0);
    for (int j = 0; j < p->nodes(); ++j) CHECK(std::fabs(prof[j] - std::exp(a)) <= 1e-4);
}

TEST_CASE("directional derivative: exact for linear, first order for nonlinear") {
    ProblemPtr lin = share(linear_system({0.2, 0.3, 0.1, -0.1}, {0.0, 0.2, 0.1, 0.0}, 2));
    Rng rng(31);
    Segment phi = random_segment(*lin, rng, 0.0, 0.5);
    Segment psi = random_segment(*lin, rng, -0.5, 0.5);
    CHECK(directional_derivative_check(lin, lin->driver, phi, psi, 1.0, 1e-2) <= 1e-10);
    CHECK(directional_derivative_check(lin, lin->driver, phi, psi, 1.0, 1e-4) <= 1e-10);

    ProblemPtr dl = share(delayed_logistic(1.0, 1.0));
    Segment phi2 = dl->make_initial_segment(0.5);
    Segment psi2 = random_segment(*dl, rng, -1.0, 1.0);
    double r1 = directional_derivative_check(dl, dl->driver, phi2, psi2, 1.0, 1e-4);
    double r2 = directional_derivative_check(dl, dl->driver, phi2, psi2, 1.0, 5e-5);
    CHECK(r1 > 1e-10);
    double ratio = r1 / r2;
    CHECK(ratio >= 1.8);
    CHECK(ratio <= 2.2);

    Segment zero = dl->zero_segment();
    CHECK(directional_derivative_check(dl, dl->driver, phi2, zero, 1.0, 1e-4) <= 1e-12);
}

TEST_CASE("monotone linearized flow keeps nonnegative data nonnegative") {
    ProblemPtr p = share(cooperative_2sp());
    Trajectory tr = integrate(p, p->driver, p->make_initial_segment(0.3), 3.0);
    CoefficientPath path = linearize_along(tr);
    CHECK(path.quasimonotone_margin() >= -1e-12);
    Rng rng(13);
    for (int trial = 0; trial < 5; ++trial) {
        Segment psi = random_segment(*p, rng, 0.0, 1.0);
        Trajectory v = integrate_variational(path, psi, 3.0);
        double worst = 0.0;
        for (double t = 0.0; t <= 3.0 + 1e-12; t += 0.25)
            for (double val : v.profile_at(t)) worst = std::min(worst, val);
        CHECK(worst >= -1e-10);
    }
}

TEST_CASE("linear semicocycle on grid splittings") {
    ProblemPtr p = share(delayed_logistic(1.0, 1.0));
    Trajectory tr = integrate(p, p->driver, p->make_initial_segment(0.5), 4.0);
    Rng rng(37);
    for (int trial = 0; trial < 5; ++trial) {
        double s = 0.25 * (1 + static_cast<int>(rng.below(8)));   // in (0, 2]
        double t = 0.25 * (1 + static_cast<int>(rng.below(8)));
        Segment psi = random_segment(*p, rng, -1.0, 1.0);

        CoefficientPath full = linearize_along(tr, {}, 0.0, s + t);
        Segment direct = segment_at(integrate_variational(full, psi, s + t), s + t);

        CoefficientPath first = linearize_along(tr, {}, 0.0, s);
        Segment mid = segment_at(integrate_variational(first, psi, s), s);
        CoefficientPath second = linearize_along(tr, {}, s, t);
        Segment composed = segment_at(integrate_variational(second, mid, t), t);

        double worst = 0.0;
        for (std::size_t k = 0; k < direct.raw().size(); ++k)
            worst = std::max(worst, std::fabs(direct.raw()[k] - composed.raw()[k]));
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("strong positivity surrogate for irreducible quasimonotone blocks") {
    // psi supported on one species only; by t = 2 every component is positive
    ProblemPtr p = share(cooperative_2sp(1.0, 1.0, 0.4, 0.4));
    Trajectory tr = integrate(p, p->driver, p->make_initial_segment(0.2), 2.0);
    CoefficientPath path = linearize_along(tr);
    Segment psi = p->zero_segment();
    for (int m = 0; m <= p->delay_steps; ++m)
        for (int j = 0; j < p->nodes(); ++j) psi.at(m, 0, j) = 1.0;
    Trajectory v = integrate_variational(path, psi, 2.0);
    auto prof = v.profile_at(2.0);
    double interior_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 2; ++i)
        for (int j = 1; j < p->nodes() - 1; ++j)
            interior_min = std::min(interior_min, prof[static_cast<std::size_t>(i) * p->nodes() + j]);
    CHECK(interior_min > 0.0);
}

TEST_CASE("window too short is an error") {
    ProblemPtr p = share(delayed_logistic(1.0, 1.0));
    Trajectory tr = integrate(p, p->driver, p->make_initial_segment(0.5), 1.0);
    CHECK_THROWS_AS(linearize_along(tr, {}, 0.0, 2.0), ConfigError);
}
