// Serial vs OpenMP kernel timings on a large mesh. Run: pfde_bench [nodes]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "pfde/kernels.hpp"
#include "pfde/parallel.hpp"
#include "pfde/solver.hpp"

using namespace pfde;
using Clock = std::chrono::steady_clock;

namespace {

double time_ms(int reps, const std::function<void()>& fn) {
    fn();  // warm up
    auto start = Clock::now();
    for (int r = 0; r < reps; ++r) fn();
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count() / reps;
}

ProblemSpec big_problem(int mesh) {
    ProblemSpec p;
    p.n = 2;
    p.diffusion = {0.1, 0.2};
    p.mesh = Mesh1D(1.0, mesh);
    p.delay_steps = 16;
    p.boundary.species.assign(2, SpeciesBoundary{});
    p.driver.frequencies = {1.0};
    p.driver.angles = {0.0};
    p.reaction.n = 2;
    p.reaction.catalog = Catalog::CooperativeLV;
    p.reaction.a = {CoeffTable::constant(1.0, 1), CoeffTable::constant(1.0, 1)};
    p.reaction.b = {CoeffTable::constant(1.0, 1), CoeffTable::constant(1.0, 1)};
    p.reaction.c.resize(4);
    p.reaction.c[1] = CoeffTable::constant(0.2, 1);
    p.reaction.c[2] = CoeffTable::constant(0.2, 1);
    p.validate();
    return p;
}

}  // namespace

int main(int argc, char** argv) {
    parallel::configure_from_env();
    const int mesh = argc > 1 ? std::atoi(argv[1]) : 1 << 18;
    const int nodes = mesh + 1;
    std::printf("nodes = %d, workers = %d\n", nodes, parallel::workers());

    ProblemSpec p = big_problem(mesh);
    std::vector<double> ynew(2 * nodes, 0.3), ydel(2 * nodes, 0.2), f(2 * nodes);
    std::vector<double> A(static_cast<std::size_t>(nodes) * 4, 0.1), B(A.size(), 0.05);
    std::vector<double> out(2 * nodes);

    double t_rs = time_ms(20, [&] {
        reaction_profile_serial(p.reaction, p.driver, p.mesh, ynew.data(), ydel.data(), nodes,
                                f.data());
    });
    double t_rp = time_ms(20, [&] {
        reaction_profile_omp(p.reaction, p.driver, p.mesh, ynew.data(), ydel.data(), nodes,
                             f.data());
    });
    std::printf("reaction_profile   serial %8.3f ms   omp %8.3f ms   speedup %.2fx\n", t_rs, t_rp,
                t_rs / t_rp);

    double t_vs = time_ms(20, [&] {
        variational_rhs_serial(A.data(), B.data(), ynew.data(), ydel.data(), 2, nodes, out.data());
    });
    double t_vp = time_ms(20, [&] {
        variational_rhs_omp(A.data(), B.data(), ynew.data(), ydel.data(), 2, nodes, out.data());
    });
    std::printf("variational_rhs    serial %8.3f ms   omp %8.3f ms   speedup %.2fx\n", t_vs, t_vp,
                t_vs / t_vp);

    double t_ms = time_ms(20, [&] { max_abs_serial(ynew.data(), ynew.size()); });
    double t_mp = time_ms(20, [&] { max_abs_omp(ynew.data(), ynew.size()); });
    std::printf("max_abs            serial %8.3f ms   omp %8.3f ms   speedup %.2fx\n", t_ms, t_mp,
                t_ms / t_mp);

    ProblemPtr pp = share(p);
    DiscreteDiffusionOperator op(*pp);
    Segment phi = pp->make_initial_segment(0.3);
    auto step_time = [&](bool par) {
        parallel::set_enabled(par);
        Stepper st(pp, &op, pp->driver, phi);
        auto start = Clock::now();
        for (int m = 0; m < 32; ++m) st.step();
        return std::chrono::duration<double, std::milli>(Clock::now() - start).count() / 32;
    };
    double t_ss = step_time(false);
    double t_sp = step_time(true);
    std::printf("full IMEX step     serial %8.3f ms   omp %8.3f ms   speedup %.2fx\n", t_ss, t_sp,
                t_ss / t_sp);
    return 0;
}
