#pragma once

#include <vector>

#include "pfde/solver.hpp"

namespace pfde {

// Reduced problem over a subset of the species: same mesh, delay grid and
// driver; diffusion and boundary rows restricted. The reaction slot is an
// empty linear placeholder (block integrations take their coefficients from a
// CoefficientPath, not from the catalog).
ProblemSpec restrict_to_species(const ProblemSpec& p, const std::vector<int>& species);

// Jacobian coefficients frozen on the solver grid along one trajectory:
// A(t,x) = D_y f(omega.t, x, z(t,x), z(t-1,x)) and B(t,x) = D_yd f(...),
// restricted to a species block. Step m of an integration driven by this path
// uses the matrices at time t0 + m h. Immutable after construction.
class CoefficientPath {
public:
    CoefficientPath() = default;

    const ProblemSpec& block_problem() const { return *block_problem_; }
    ProblemPtr block_problem_ptr() const { return block_problem_; }
    const std::vector<int>& species() const { return species_; }
    int block_size() const { return static_cast<int>(species_.size()); }
    int steps() const { return steps_; }
    int nodes() const { return nodes_; }
    double t0() const { return t0_; }
    const DriverState& initial_driver() const { return omega0_; }

    // nodes * nb * nb coefficients for step m.
    const double* A_at(int m) const { return A_.data() + offset(m); }
    const double* B_at(int m) const { return B_.data() + offset(m); }

    // Most negative entry among off-diagonal A and all B values (the frozen
    // path inherits quasimonotonicity from the catalog entry).
    double quasimonotone_margin() const;

private:
    friend CoefficientPath linearize_along(const Trajectory& tr, const std::vector<int>& block,
                                           double t0, double T);

    std::size_t offset(int m) const {
        return static_cast<std::size_t>(m) * nodes_ * species_.size() * species_.size();
    }

    ProblemPtr block_problem_;
    std::vector<int> species_;
    DriverState omega0_;
    double t0_ = 0.0;
    int steps_ = 0;
    int nodes_ = 0;
    std::vector<double> A_, B_;
};

// Evaluates the Jacobians on the stored trajectory at every grid time in
// [t0, t0 + T) and every mesh node. An empty block means all species. The
// trajectory must cover [t0 - 1, t0 + T].
CoefficientPath linearize_along(const Trajectory& tr, const std::vector<int>& block = {},
                                double t0 = 0.0, double T = -1.0);

// One IMEX step of the linear system v' = D Lap v + A(t,x) v + B(t,x) v(t-1).
// Same scheme and diffusion factorizations as the nonlinear Stepper, so the
// directional-derivative check converges.
class VariationalStepper {
public:
    VariationalStepper(const CoefficientPath& path, const Segment& psi);

    void step();
    int steps_done() const { return m_; }
    double time() const { return path_->t0() + m_ * h_; }
    const Field& past(int back) const;
    // Sup over the whole delay window.
    double window_norm() const;
    double newest_norm() const;
    void scale(double factor);

private:
    const CoefficientPath* path_;
    DiscreteDiffusionOperator op_;
    double h_;
    int m_ = 0;
    int head_;
    std::vector<Field> ring_;
    std::vector<double> ring_max_;  // cached sup per ring slot
    Field rhs_;
};

// Linear IMEX integration over [t0, t0 + T] with the frozen coefficient path;
// exactly linear in psi. Overflow (values beyond 1e300) is recorded as blowup.
Trajectory integrate_variational(const CoefficientPath& path, const Segment& psi, double T);

// || (z_t(omega, phi + eps psi) - z_t(omega, phi)) / eps - v_t(omega, phi, psi) ||
// in the segment sup-norm.
double directional_derivative_check(ProblemPtr p, const DriverState& omega, const Segment& phi,
                                    const Segment& psi, double t, double eps);

}  // namespace pfde
