#include "pfde/solver.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "pfde/kernels.hpp"

namespace pfde {

namespace {

int grid_steps(double t, double h, const char* what) {
    double q = t / h;
    int k = static_cast<int>(std::llround(q));
    if (k < 0 || std::fabs(q - k) > 1e-9 * std::max(1.0, std::fabs(q)))
        throw ConfigError(std::string(what) + " = " + std::to_string(t) +
                          " is not a nonnegative multiple of the step h = " + std::to_string(h));
    return k;
}

}  // namespace

Stepper::Stepper(ProblemPtr p, const DiscreteDiffusionOperator* op, const DriverState& omega,
                 const Segment& phi)
    : p_(std::move(p)), op_(op), omega_(omega), t_(0.0) {
    const int M = p_->delay_steps;
    const std::size_t fld = static_cast<std::size_t>(p_->n) * p_->nodes();
    ring_.assign(M + 1, Field(fld));
    for (int m = 0; m <= M; ++m)
        std::memcpy(ring_[m].data(), phi.raw().data() + static_cast<std::size_t>(m) * fld,
                    fld * sizeof(double));
    head_ = M;
    rhs_.resize(p_->nodes());
    fval_.resize(fld);
}

const Field& Stepper::past(int back) const {
    const int sz = static_cast<int>(ring_.size());
    return ring_[((head_ - back) % sz + sz) % sz];
}

double Stepper::max_abs_newest() const {
    return max_abs(ring_[head_].data(), ring_[head_].size());
}

void Stepper::scale(double factor) {
    for (Field& f : ring_)
        for (double& v : f) v *= factor;
}

void Stepper::step() {
    const int n = p_->n;
    const int nodes = p_->nodes();
    const int M = p_->delay_steps;
    const double h = p_->h();
    const Field& newest = ring_[head_];
    const int oldest = (head_ + 1) % (M + 1);
    const Field& delayed = ring_[oldest];

    reaction_profile(p_->reaction, omega_, p_->mesh, newest.data(), delayed.data(), nodes,
                     fval_.data());

    Field& out = ring_[oldest];  // overwritten only after fval_ is complete
    for (int i = 0; i < n; ++i) {
        std::span<const double> ui{newest.data() + static_cast<std::size_t>(i) * nodes,
                                   static_cast<std::size_t>(nodes)};
        std::span<double> oi{out.data() + static_cast<std::size_t>(i) * nodes,
                             static_cast<std::size_t>(nodes)};
        op_->cn_rhs(i, ui, oi);
        const double* fi = fval_.data() + static_cast<std::size_t>(i) * nodes;
        for (int j = 0; j < nodes; ++j) oi[j] += h * fi[j];
        op_->cn_solve(i, oi);
    }
    head_ = oldest;
    t_ += h;
    omega_ = advance_driver(omega_, h);
}

Trajectory::Builder::Builder(ProblemPtr p, const DriverState& omega0, const Segment& phi,
                             int steps_hint) {
    const int M = p->delay_steps;
    fld_ = static_cast<std::size_t>(p->n) * p->nodes();
    tr_.problem_ = std::move(p);
    tr_.omega0_ = omega0;
    tr_.history_.reserve(static_cast<std::size_t>(M + steps_hint + 1) * fld_);
    tr_.driver_angles_.reserve(static_cast<std::size_t>(steps_hint + 1) * omega0.dim());
    tr_.history_.assign(phi.raw().begin(), phi.raw().end());
    tr_.driver_angles_.assign(omega0.angles.begin(), omega0.angles.end());
    tr_.times_count_ = static_cast<std::size_t>(M + 1);
}

void Trajectory::Builder::push_step(const Field& profile, const DriverState& omega) {
    tr_.history_.insert(tr_.history_.end(), profile.begin(), profile.end());
    tr_.driver_angles_.insert(tr_.driver_angles_.end(), omega.angles.begin(),
                              omega.angles.end());
    tr_.times_count_ += 1;
    ++pushed_;
}

void Trajectory::Builder::mark_blowup(double last_valid_time) {
    tr_.blowup_time_ = last_valid_time;
}

Trajectory Trajectory::Builder::take(const std::vector<double>& snapshot_times) {
    tr_.t_end_ = pushed_ * tr_.problem_->h();
    for (double ts : snapshot_times) {
        if (ts > tr_.t_end_ + 1e-12) {
            if (tr_.blowup_time_) break;  // truncated run: drop unreachable snapshots
            throw TimeNotAvailable("snapshot time beyond integration horizon");
        }
        tr_.snapshot_times_.push_back(ts);
        tr_.snapshots_.push_back(segment_at(tr_, ts));
    }
    return std::move(tr_);
}

int Trajectory::grid_index(double t, double lo) const {
    const double h = problem_->h();
    double q = (t - lo) / h;
    long k = std::lround(q);
    if (std::fabs(q - k) > 1e-9 * std::max(1.0, std::fabs(q)) || k < 0 ||
        k >= static_cast<long>(times_count_))
        throw TimeNotAvailable("time " + std::to_string(t) + " is not on the stored grid [" +
                               std::to_string(lo) + ", " + std::to_string(t_end_) + "]");
    return static_cast<int>(k);
}

std::span<const double> Trajectory::profile_at(double t) const {
    const std::size_t fld = static_cast<std::size_t>(problem_->n) * problem_->nodes();
    int q = grid_index(t, -1.0);
    return {history_.data() + q * fld, fld};
}

DriverState Trajectory::driver_at(double t) const {
    const std::size_t k = omega0_.frequencies.size();
    int q = grid_index(t, -1.0) - problem_->delay_steps;
    if (q < 0) throw TimeNotAvailable("driver path stored for t >= 0 only");
    DriverState out = omega0_;
    out.angles.assign(driver_angles_.begin() + q * k, driver_angles_.begin() + (q + 1) * k);
    return out;
}

Trajectory integrate(ProblemPtr p, const DriverState& omega, const Segment& phi, double T,
                     const std::vector<double>& snapshot_times, const IntegrateOptions& opts) {
    p->require_admissible(phi);
    if (omega.frequencies != p->driver.frequencies)
        throw ConfigError("driver frequencies do not match the problem driver");
    const double h = p->h();
    const int steps = grid_steps(T, h, "integration time T");

    DiscreteDiffusionOperator op(*p);
    Stepper st(p, &op, omega, phi);
    Trajectory::Builder builder(p, omega, phi, steps);

    for (int m = 1; m <= steps; ++m) {
        st.step();
        const Field& u = st.past(0);
        if (max_abs(u.data(), u.size()) > opts.blowup_bound) {
            builder.mark_blowup((m - 1) * h);
            break;
        }
        builder.push_step(u, st.driver());
    }
    Trajectory tr = builder.take(snapshot_times);
    if (tr.blowup_time() && opts.throw_on_blowup) tr.throw_if_blowup();
    return tr;
}

Segment segment_at(const Trajectory& tr, double t) {
    const ProblemSpec& p = tr.problem();
    const int M = p.delay_steps;
    const std::size_t fld = static_cast<std::size_t>(p.n) * p.nodes();
    int q = tr.grid_index(t, -1.0);
    if (q < M) throw TimeNotAvailable("segment_at: t must be >= 0");
    Segment seg = p.zero_segment();
    for (int m = 0; m <= M; ++m)
        std::memcpy(seg.raw().data() + static_cast<std::size_t>(m) * fld,
                    tr.history_.data() + static_cast<std::size_t>(q - M + m) * fld,
                    fld * sizeof(double));
    return seg;
}

Field solve_diffusion_only(const ProblemSpec& p, int species, const Field& z0, double t) {
    if (species < 0 || species >= p.n) throw ConfigError("species index out of range");
    if (z0.size() != static_cast<std::size_t>(p.nodes()))
        throw ConfigError("solve_diffusion_only: profile size != mesh nodes");
    const int steps = grid_steps(t, p.h(), "diffusion time t");
    DiscreteDiffusionOperator op(p);
    Field u = z0;
    Field tmp(u.size());
    for (int m = 0; m < steps; ++m) {
        op.cn_rhs(species, u, tmp);
        op.cn_solve(species, tmp);
        std::swap(u, tmp);
    }
    return u;
}

namespace {
constexpr char kMagic[8] = {'P', 'F', 'D', 'E', 'S', 'N', 'A', 'P'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}
std::uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}
void put_f64(std::ostream& out, double v) {
    std::uint64_t u;
    std::memcpy(&u, &v, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(u >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
}
double get_f64(std::istream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &u, 8);
    return v;
}
}  // namespace

void save_state(const std::string& path, const ProblemSpec& p, const DriverState& omega,
                double t, const Segment& phi) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open state file '" + path + "' for writing");
    out.write(kMagic, 8);
    put_u32(out, kVersion);
    put_u32(out, static_cast<std::uint32_t>(p.n));
    put_u32(out, static_cast<std::uint32_t>(p.mesh.intervals));
    put_u32(out, static_cast<std::uint32_t>(p.delay_steps));
    put_f64(out, p.mesh.length);
    put_f64(out, t);
    put_u32(out, static_cast<std::uint32_t>(omega.dim()));
    for (double a : omega.angles) put_f64(out, a);
    for (double f : omega.frequencies) put_f64(out, f);
    for (double v : phi.raw()) put_f64(out, v);
    if (!out) throw ConfigError("failed writing state file '" + path + "'");
}

SavedState load_state(const std::string& path, const ProblemSpec& p) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open state file '" + path + "'");
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kMagic, 8) != 0)
        throw ConfigError("state file '" + path + "' has wrong magic");
    if (get_u32(in) != kVersion) throw ConfigError("unsupported state file version");
    std::uint32_t n = get_u32(in), N = get_u32(in), M = get_u32(in);
    double length = get_f64(in);
    if (n != static_cast<std::uint32_t>(p.n) || N != static_cast<std::uint32_t>(p.mesh.intervals) ||
        M != static_cast<std::uint32_t>(p.delay_steps) ||
        std::fabs(length - p.mesh.length) > 1e-12)
        throw ConfigError("state file discretization does not match the problem");
    SavedState s;
    s.t = get_f64(in);
    std::uint32_t k = get_u32(in);
    s.omega.angles.resize(k);
    s.omega.frequencies.resize(k);
    for (auto& a : s.omega.angles) a = get_f64(in);
    for (auto& f : s.omega.frequencies) f = get_f64(in);
    s.phi = p.zero_segment();
    for (double& v : s.phi.raw()) v = get_f64(in);
    if (!in) throw ConfigError("state file '" + path + "' is truncated");
    return s;
}

}  // namespace pfde
