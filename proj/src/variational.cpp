#include "pfde/variational.hpp"

#include <cmath>
#include <cstring>

#include "pfde/kernels.hpp"

namespace pfde {

ProblemSpec restrict_to_species(const ProblemSpec& p, const std::vector<int>& species) {
    ProblemSpec r;
    r.n = static_cast<int>(species.size());
    r.mesh = p.mesh;
    r.delay_steps = p.delay_steps;
    r.driver = p.driver;
    for (int i : species) {
        if (i < 0 || i >= p.n) throw ConfigError("block species index out of range");
        r.diffusion.push_back(p.diffusion[i]);
        r.boundary.species.push_back(p.boundary.species[i]);
    }
    r.reaction.catalog = Catalog::Linear;
    r.reaction.n = r.n;
    return r;
}

CoefficientPath linearize_along(const Trajectory& tr, const std::vector<int>& block, double t0,
                                double T) {
    const ProblemSpec& p = tr.problem();
    const double h = p.h();
    if (T < 0.0) T = tr.t_end() - t0;
    const int steps = static_cast<int>(std::llround(T / h));
    if (std::fabs(T - steps * h) > 1e-9 || steps < 0)
        throw ConfigError("linearization horizon must be a nonnegative multiple of h");
    if (t0 < -1e-12 || t0 + T > tr.t_end() + 1e-12)
        throw ConfigError("trajectory window too short for the requested linearization");

    CoefficientPath path;
    path.species_ = block;
    if (path.species_.empty())
        for (int i = 0; i < p.n; ++i) path.species_.push_back(i);
    path.block_problem_ = share(restrict_to_species(p, path.species_));
    path.omega0_ = tr.driver_at(t0);
    path.t0_ = t0;
    path.steps_ = steps;
    path.nodes_ = p.nodes();

    const int n = p.n;
    const int nb = path.block_size();
    const int nodes = p.nodes();
    path.A_.resize(static_cast<std::size_t>(steps) * nodes * nb * nb);
    path.B_.resize(path.A_.size());

    std::vector<double> y(n), yd(n), dy(n * n), dyd(n * n);
    for (int m = 0; m < steps; ++m) {
        const double t = t0 + m * h;
        std::span<const double> znow = tr.profile_at(t);
        std::span<const double> zdel = tr.profile_at(t - 1.0);
        DriverState omega = tr.driver_at(t);
        for (int j = 0; j < nodes; ++j) {
            for (int i = 0; i < n; ++i) {
                y[i] = znow[static_cast<std::size_t>(i) * nodes + j];
                yd[i] = zdel[static_cast<std::size_t>(i) * nodes + j];
            }
            p.reaction.jacobians(omega, p.mesh.x(j), y.data(), yd.data(), dy.data(), dyd.data());
            double* Aj = path.A_.data() + path.offset(m) + static_cast<std::size_t>(j) * nb * nb;
            double* Bj = path.B_.data() + path.offset(m) + static_cast<std::size_t>(j) * nb * nb;
            for (int r = 0; r < nb; ++r)
                for (int c = 0; c < nb; ++c) {
                    Aj[r * nb + c] = dy[path.species_[r] * n + path.species_[c]];
                    Bj[r * nb + c] = dyd[path.species_[r] * n + path.species_[c]];
                }
        }
    }
    return path;
}

double CoefficientPath::quasimonotone_margin() const {
    const int nb = block_size();
    double worst = 0.0;
    for (std::size_t k = 0; k < A_.size(); ++k) {
        if (static_cast<int>(k % (nb * nb)) % (nb + 1) != 0)  // off-diagonal of the nb x nb block
            worst = std::min(worst, A_[k]);
        worst = std::min(worst, B_[k]);
    }
    return worst;
}

VariationalStepper::VariationalStepper(const CoefficientPath& path, const Segment& psi)
    : path_(&path), op_(path.block_problem()), h_(path.block_problem().h()) {
    const ProblemSpec& bp = path.block_problem();
    bp.require_admissible(psi);
    const int M = bp.delay_steps;
    const std::size_t fld = static_cast<std::size_t>(bp.n) * bp.nodes();
    ring_.assign(M + 1, Field(fld));
    ring_max_.assign(M + 1, 0.0);
    for (int m = 0; m <= M; ++m) {
        std::memcpy(ring_[m].data(), psi.raw().data() + static_cast<std::size_t>(m) * fld,
                    fld * sizeof(double));
        ring_max_[m] = max_abs(ring_[m].data(), fld);
    }
    head_ = M;
    rhs_.resize(fld);
}

const Field& VariationalStepper::past(int back) const {
    const int sz = static_cast<int>(ring_.size());
    return ring_[((head_ - back) % sz + sz) % sz];
}

double VariationalStepper::window_norm() const {
    double m = 0.0;
    for (double v : ring_max_) m = std::max(m, v);
    return m;
}

double VariationalStepper::newest_norm() const { return ring_max_[head_]; }

void VariationalStepper::scale(double factor) {
    for (Field& f : ring_)
        for (double& v : f) v *= factor;
    for (double& v : ring_max_) v *= std::fabs(factor);
}

void VariationalStepper::step() {
    if (m_ >= path_->steps()) throw ConfigError("variational step beyond the coefficient path");
    const ProblemSpec& bp = path_->block_problem();
    const int nb = bp.n;
    const int nodes = bp.nodes();
    const int M = bp.delay_steps;
    const Field& newest = ring_[head_];
    const int oldest = (head_ + 1) % (M + 1);
    const Field& delayed = ring_[oldest];

    variational_rhs(path_->A_at(m_), path_->B_at(m_), newest.data(), delayed.data(), nb, nodes,
                    rhs_.data());

    Field& out = ring_[oldest];
    for (int i = 0; i < nb; ++i) {
        std::span<const double> ui{newest.data() + static_cast<std::size_t>(i) * nodes,
                                   static_cast<std::size_t>(nodes)};
        std::span<double> oi{out.data() + static_cast<std::size_t>(i) * nodes,
                             static_cast<std::size_t>(nodes)};
        op_.cn_rhs(i, ui, oi);  // `out` aliases `delayed`, already consumed above
        const double* fi = rhs_.data() + static_cast<std::size_t>(i) * nodes;
        for (int j = 0; j < nodes; ++j) oi[j] += h_ * fi[j];
        op_.cn_solve(i, oi);
    }
    ring_max_[oldest] = max_abs(out.data(), out.size());
    head_ = oldest;
    ++m_;
}

Trajectory integrate_variational(const CoefficientPath& path, const Segment& psi, double T) {
    const ProblemSpec& bp = path.block_problem();
    const double h = bp.h();
    const int steps = static_cast<int>(std::llround(T / h));
    if (std::fabs(T - steps * h) > 1e-9 || steps < 0)
        throw ConfigError("variational horizon must be a nonnegative multiple of h");
    if (steps > path.steps())
        throw ConfigError("variational horizon exceeds the coefficient path");

    VariationalStepper st(path, psi);
    DriverState omega = path.initial_driver();
    Trajectory::Builder builder(path.block_problem_ptr(), omega, psi, steps);
    for (int m = 1; m <= steps; ++m) {
        st.step();
        omega = advance_driver(omega, h);
        const Field& v = st.past(0);
        if (max_abs(v.data(), v.size()) > 1e300) {
            builder.mark_blowup((m - 1) * h);
            break;
        }
        builder.push_step(v, omega);
    }
    return builder.take({});
}

double directional_derivative_check(ProblemPtr p, const DriverState& omega, const Segment& phi,
                                    const Segment& psi, double t, double eps) {
    Segment shifted = phi;
    for (std::size_t k = 0; k < shifted.raw().size(); ++k)
        shifted.raw()[k] += eps * psi.raw()[k];

    IntegrateOptions opts;
    opts.throw_on_blowup = true;
    Trajectory base = integrate(p, omega, phi, t, {}, opts);
    Trajectory moved = integrate(p, omega, shifted, t, {}, opts);

    CoefficientPath path = linearize_along(base);
    Trajectory var = integrate_variational(path, psi, t);
    var.throw_if_blowup();

    Segment za = segment_at(base, t);
    Segment zb = segment_at(moved, t);
    Segment v = segment_at(var, t);
    double worst = 0.0;
    for (std::size_t k = 0; k < za.raw().size(); ++k) {
        double fd = (zb.raw()[k] - za.raw()[k]) / eps;
        worst = std::max(worst, std::fabs(fd - v.raw()[k]));
    }
    return worst;
}

}  // namespace pfde
