#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pfde/diffusion.hpp"
#include "pfde/problem.hpp"

namespace pfde {

// Requested time is off the stored grid or outside the integrated range.
class TimeNotAvailable : public std::runtime_error {
public:
    explicit TimeNotAvailable(const std::string& msg) : std::runtime_error(msg) {}
};

using Field = std::vector<double>;  // one spatial profile, n * nodes

struct IntegrateOptions {
    double blowup_bound = 1e8;
    bool throw_on_blowup = false;
};

// Fine-grid path of one solution: profiles at every step from t = -1 to
// t_end plus the driver angles along the way. Snapshots are segments
// extracted at the requested times. Confined to one worker while integrating;
// read-only afterwards.
class Trajectory {
public:
    Trajectory() = default;

    const ProblemSpec& problem() const { return *problem_; }
    ProblemPtr problem_ptr() const { return problem_; }
    const DriverState& initial_driver() const { return omega0_; }
    double t_end() const { return t_end_; }
    std::optional<double> blowup_time() const { return blowup_time_; }

    const std::vector<double>& snapshot_times() const { return snapshot_times_; }
    const std::vector<Segment>& snapshots() const { return snapshots_; }

    // Profile at grid time t (t in [-1, t_end]).
    std::span<const double> profile_at(double t) const;
    // Driver angles at grid time t >= 0.
    DriverState driver_at(double t) const;

    void throw_if_blowup() const {
        if (blowup_time_)
            throw BlowupError("numerical blowup at t = " + std::to_string(*blowup_time_),
                              *blowup_time_);
    }

    // Incremental assembly used by the nonlinear and variational integrators.
    class Builder;

private:
    friend Segment segment_at(const Trajectory& tr, double t);

    int grid_index(double t, double lo) const;

    ProblemPtr problem_;
    DriverState omega0_;
    double t_end_ = 0.0;
    std::optional<double> blowup_time_;
    std::vector<double> snapshot_times_;
    std::vector<Segment> snapshots_;
    std::size_t times_count_ = 0;            // number of stored profiles
    std::vector<double> history_;            // times_count_ * n * nodes
    std::vector<double> driver_angles_;      // per step from t=0: (steps+1) * k
};

class Trajectory::Builder {
public:
    Builder(ProblemPtr p, const DriverState& omega0, const Segment& phi, int steps_hint);
    void push_step(const Field& profile, const DriverState& omega);
    void mark_blowup(double last_valid_time);
    Trajectory take(const std::vector<double>& snapshot_times);

private:
    Trajectory tr_;
    std::size_t fld_;
    int pushed_ = 0;
};

// One IMEX step of every species: implicit Crank-Nicolson diffusion, explicit
// reaction from the newest and delayed profiles in the ring buffer. Exposed
// for the solver's own loop and for tests that drive single steps.
class Stepper {
public:
    Stepper(ProblemPtr p, const DiscreteDiffusionOperator* op, const DriverState& omega,
            const Segment& phi);

    void step();

    double time() const { return t_; }
    const DriverState& driver() const { return omega_; }
    // Profile m steps back from the newest (0 = newest, M = delayed by 1).
    const Field& past(int back) const;
    double max_abs_newest() const;
    // Multiply the whole window by a factor (used by renormalized linear runs).
    void scale(double factor);

private:
    ProblemPtr p_;
    const DiscreteDiffusionOperator* op_;
    DriverState omega_;
    double t_;
    int head_;                   // ring index of the newest profile
    std::vector<Field> ring_;    // M+1 profiles
    Field rhs_, fval_;
};

// Integrates the nonlinear system from segment phi over [0, T] by the method
// of steps; T and the snapshot times must be multiples of h = 1/M. On blowup
// the trajectory records the last valid time (or throws, per options).
Trajectory integrate(ProblemPtr p, const DriverState& omega, const Segment& phi, double T,
                     const std::vector<double>& snapshot_times = {},
                     const IntegrateOptions& opts = {});

// Delay-history segment at grid time t in [0, t_end].
Segment segment_at(const Trajectory& tr, double t);

// Approximates e^{tA_i} z0 with the same Crank-Nicolson diffusion stage and
// zero reaction; t >= 0 must be a multiple of h.
Field solve_diffusion_only(const ProblemSpec& p, int species, const Field& z0, double t);

// Versioned binary state dump (little-endian doubles) for restart.
void save_state(const std::string& path, const ProblemSpec& p, const DriverState& omega,
                double t, const Segment& phi);
struct SavedState {
    DriverState omega;
    double t = 0.0;
    Segment phi;
};
SavedState load_state(const std::string& path, const ProblemSpec& p);

}  // namespace pfde
