#include "pfde/harness.hpp"

#include <cmath>
#include <functional>

namespace pfde {

QuasimonotoneReport check_quasimonotone(const ProblemSpec& p, int samples, const SampleBox& box,
                                        std::uint64_t seed) {
    QuasimonotoneReport rep;
    rep.samples = samples;
    Rng rng(seed);
    const int n = p.n;
    std::vector<double> y(n), yd(n), dy(n * n), dyd(n * n);
    DriverState omega = p.driver;
    for (int s = 0; s < samples; ++s) {
        for (auto& ang : omega.angles) ang = rng.uniform(0.0, kTwoPi);
        double x = rng.uniform(0.0, p.mesh.length);
        for (int i = 0; i < n; ++i) {
            y[i] = rng.uniform(box.y_lo[i], box.y_hi[i]);
            yd[i] = rng.uniform(box.yd_lo[i], box.yd_hi[i]);
        }
        p.reaction.jacobians(omega, x, y.data(), yd.data(), dy.data(), dyd.data());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double a = (i != j) ? dy[i * n + j] : 0.0;
                double b = dyd[i * n + j];
                double worst_here = std::min(a, b);
                if (worst_here < rep.worst) {
                    rep.worst = worst_here;
                    rep.witness_angles = omega.angles;
                    rep.witness_y = y;
                    rep.witness_yd = yd;
                    rep.witness_x = x;
                    rep.witness_i = i;
                    rep.witness_j = j;
                    rep.witness_delayed = b < a || i == j;
                }
            }
    }
    rep.pass = rep.worst >= -1e-12;
    return rep;
}

namespace {

// corners of the 2n-dimensional box, capped; plus random interior points
void for_each_sample_point(const SampleBox& box, int n, Rng& rng, int random_samples,
                           const std::function<void(const double*, const double*)>& fn) {
    std::vector<double> y(n), yd(n);
    const int dims = 2 * n;
    if (dims <= 16) {
        for (std::uint64_t mask = 0; mask < (1ull << dims); ++mask) {
            for (int i = 0; i < n; ++i) {
                y[i] = (mask >> i) & 1 ? box.y_hi[i] : box.y_lo[i];
                yd[i] = (mask >> (n + i)) & 1 ? box.yd_hi[i] : box.yd_lo[i];
            }
            fn(y.data(), yd.data());
        }
    }
    for (int s = 0; s < random_samples; ++s) {
        for (int i = 0; i < n; ++i) {
            y[i] = rng.uniform(box.y_lo[i], box.y_hi[i]);
            yd[i] = rng.uniform(box.yd_lo[i], box.yd_hi[i]);
        }
        fn(y.data(), yd.data());
    }
}

}  // namespace

double lipschitz_bound(const ProblemSpec& p, const SampleBox& box, std::uint64_t seed,
                       int random_samples) {
    Rng rng(seed);
    const int n = p.n;
    std::vector<double> dy(n * n), dyd(n * n);
    double L = 0.0;
    // omega grid x spatial grid per point set
    const int omega_grid = p.driver.dim() == 0 ? 1 : 8;
    const int x_grid = 9;
    DriverState omega = p.driver;
    for (int g = 0; g < omega_grid; ++g) {
        for (std::size_t a = 0; a < omega.angles.size(); ++a)
            omega.angles[a] = wrap_angle(p.driver.angles[a] + kTwoPi * g / omega_grid);
        for (int xg = 0; xg <= x_grid; ++xg) {
            double x = p.mesh.length * xg / x_grid;
            for_each_sample_point(box, n, rng, random_samples / (omega_grid * (x_grid + 1)) + 1,
                                  [&](const double* y, const double* yd) {
                                      p.reaction.jacobians(omega, x, y, yd, dy.data(), dyd.data());
                                      for (int i = 0; i < n; ++i) {
                                          double row = 0.0;
                                          for (int j = 0; j < n; ++j)
                                              row += std::fabs(dy[i * n + j]) +
                                                     std::fabs(dyd[i * n + j]);
                                          L = std::max(L, row);
                                      }
                                  });
        }
    }
    return L;
}

ComparisonReport check_comparison(ProblemPtr p, const DriverState& omega, const Segment& phi,
                                  const Segment& psi, double T, int pair_id) {
    const Order order = segment_compare(phi, psi);
    if (order != Order::LEQ && order != Order::EQUAL)
        throw ConfigError("check_comparison requires an ordered pair phi <= psi");

    ComparisonReport rep;
    rep.pair_id = pair_id;
    const int n = p->n;
    const int nodes = p->nodes();
    const double h = p->h();
    const int steps = static_cast<int>(std::llround(T / h));

    IntegrateOptions opts;
    opts.throw_on_blowup = true;
    Trajectory lo = integrate(p, omega, phi, T, {}, opts);
    Trajectory hi = integrate(p, omega, psi, T, {}, opts);

    // bounding box of both trajectories, inflated by 10%
    double vmin = 0.0, vmax = 0.0;
    for (double t = 0.0; t <= T + 1e-12; t += h) {
        auto a = lo.profile_at(t);
        auto b = hi.profile_at(t);
        for (double v : a) {
            vmin = std::min(vmin, v);
            vmax = std::max(vmax, v);
        }
        for (double v : b) {
            vmin = std::min(vmin, v);
            vmax = std::max(vmax, v);
        }
    }
    const double pad = 0.1 * std::max(1e-12, vmax - vmin);
    rep.box = SampleBox::uniform(n, vmin - pad, vmax + pad);
    rep.lipschitz = lipschitz_bound(*p, rep.box);

    // diffusion-only propagation of psi(0) - phi(0), captured per step
    DiscreteDiffusionOperator op(*p);
    std::vector<Field> diff(n, Field(nodes));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < nodes; ++j)
            diff[i][j] = psi.at(p->delay_steps, i, j) - phi.at(p->delay_steps, i, j);

    rep.tolerance = 1e-6 * (1.0 + std::max(segment_norm(phi), segment_norm(psi)));
    rep.worst_margin = std::numeric_limits<double>::infinity();
    Field tmp(nodes);
    for (int m = 0; m <= steps; ++m) {
        const double t = m * h;
        if (m > 0)
            for (int i = 0; i < n; ++i) {
                op.cn_rhs(i, diff[i], tmp);
                op.cn_solve(i, tmp);
                diff[i] = tmp;
            }
        auto a = lo.profile_at(t);
        auto b = hi.profile_at(t);
        const double decay = std::exp(-rep.lipschitz * t);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < nodes; ++j) {
                double lhs = b[static_cast<std::size_t>(i) * nodes + j] -
                             a[static_cast<std::size_t>(i) * nodes + j];
                double margin = lhs - decay * diff[i][j];
                rep.worst_margin = std::min(rep.worst_margin, margin);
            }
        if (m % std::max(1, steps / 16) == 0) rep.times.push_back(t);
    }
    rep.pass = rep.worst_margin >= -rep.tolerance;
    return rep;
}

std::vector<MonotonicityResult> check_monotonicity(
    ProblemPtr p, const std::vector<std::pair<Segment, Segment>>& pairs, double T) {
    std::vector<MonotonicityResult> results(pairs.size());
    const double h = p->h();
    const int steps = static_cast<int>(std::llround(T / h));
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t pi = 0; pi < static_cast<std::ptrdiff_t>(pairs.size()); ++pi) {
        const auto& [phi, psi] = pairs[pi];
        MonotonicityResult r;
        r.pair_id = static_cast<int>(pi);
        IntegrateOptions opts;
        opts.throw_on_blowup = true;
        Trajectory lo = integrate(p, p->driver, phi, T, {}, opts);
        Trajectory hi = integrate(p, p->driver, psi, T, {}, opts);
        for (int m = 0; m <= steps; ++m) {
            const double t = m * h;
            auto a = lo.profile_at(t);
            auto b = hi.profile_at(t);
            for (std::size_t k = 0; k < a.size(); ++k) {
                double viol = a[k] - b[k];
                if (viol > r.worst_violation) {
                    r.worst_violation = viol;
                    r.time_of_worst = t;
                }
            }
        }
        r.pass = r.worst_violation <= 1e-8;
        results[pi] = r;
    }
    return results;
}

Segment random_segment(const ProblemSpec& p, Rng& rng, double lo, double hi) {
    Segment phi = p.zero_segment();
    const int nodes = p.nodes();
    const double l = p.mesh.length;
    for (int i = 0; i < p.n; ++i) {
        const bool dirichlet = p.boundary.species[i].kind == BoundaryKind::Dirichlet;
        // smooth low-mode field; amplitudes chosen so values stay in [lo, hi]
        // without clamping (clamp kinks would inject high spatial modes)
        double ax = rng.uniform(0.0, 0.25) * (hi - lo);
        double as = rng.uniform(0.0, 0.25) * (hi - lo);
        double c0 = rng.uniform(lo + ax + as, hi - ax - as);
        double px = rng.uniform(0.0, kTwoPi);
        for (int m = 0; m <= p.delay_steps; ++m) {
            double s = -1.0 + static_cast<double>(m) / p.delay_steps;
            for (int j = 0; j < nodes; ++j) {
                double x = p.mesh.x(j);
                double v = c0 + ax * std::cos(kTwoPi * x / l + px) + as * std::sin(M_PI * s);
                if (dirichlet) v *= std::sin(M_PI * x / l);
                phi.at(m, i, j) = v;
            }
            if (dirichlet) {
                phi.at(m, i, 0) = 0.0;
                phi.at(m, i, nodes - 1) = 0.0;
            }
        }
    }
    return phi;
}

std::pair<Segment, Segment> random_ordered_pair(const ProblemSpec& p, Rng& rng, double lo,
                                                double hi) {
    Segment phi = random_segment(p, rng, lo, 0.5 * (lo + hi));
    Segment bump = random_segment(p, rng, 0.0, 0.5 * (hi - lo));
    Segment psi = phi;
    for (std::size_t k = 0; k < psi.raw().size(); ++k) psi.raw()[k] += bump.raw()[k];
    return {phi, psi};
}

}  // namespace pfde
