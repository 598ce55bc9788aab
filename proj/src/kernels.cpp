#include "pfde/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "pfde/parallel.hpp"

namespace pfde {

namespace {
// Below this many node evaluations the OpenMP fork costs more than it saves.
constexpr int kMinParallelNodes = 2048;
}  // namespace

void reaction_profile_serial(const ReactionTerm& r, const DriverState& omega, const Mesh1D& mesh,
                             const double* ynew, const double* ydel, int nodes, double* f_out) {
    const int n = r.n;
    std::vector<double> y(n), yd(n), f(n);
    for (int j = 0; j < nodes; ++j) {
        for (int i = 0; i < n; ++i) {
            y[i] = ynew[i * nodes + j];
            yd[i] = ydel[i * nodes + j];
        }
        r.eval(omega, mesh.x(j), y.data(), yd.data(), f.data());
        for (int i = 0; i < n; ++i) f_out[i * nodes + j] = f[i];
    }
}

void reaction_profile_omp(const ReactionTerm& r, const DriverState& omega, const Mesh1D& mesh,
                          const double* ynew, const double* ydel, int nodes, double* f_out) {
    const int n = r.n;
#pragma omp parallel
    {
        std::vector<double> y(n), yd(n), f(n);
#pragma omp for schedule(static)
        for (int j = 0; j < nodes; ++j) {
            for (int i = 0; i < n; ++i) {
                y[i] = ynew[i * nodes + j];
                yd[i] = ydel[i * nodes + j];
            }
            r.eval(omega, mesh.x(j), y.data(), yd.data(), f.data());
            for (int i = 0; i < n; ++i) f_out[i * nodes + j] = f[i];
        }
    }
}

void reaction_profile(const ReactionTerm& r, const DriverState& omega, const Mesh1D& mesh,
                      const double* ynew, const double* ydel, int nodes, double* f_out) {
    if (parallel::enabled() && nodes >= kMinParallelNodes && parallel::workers() > 1)
        reaction_profile_omp(r, omega, mesh, ynew, ydel, nodes, f_out);
    else
        reaction_profile_serial(r, omega, mesh, ynew, ydel, nodes, f_out);
}

void variational_rhs_serial(const double* A, const double* B, const double* v, const double* vd,
                            int nb, int nodes, double* out) {
    for (int j = 0; j < nodes; ++j) {
        const double* Aj = A + static_cast<std::size_t>(j) * nb * nb;
        const double* Bj = B + static_cast<std::size_t>(j) * nb * nb;
        for (int i = 0; i < nb; ++i) {
            double s = 0.0;
            for (int c = 0; c < nb; ++c)
                s += Aj[i * nb + c] * v[c * nodes + j] + Bj[i * nb + c] * vd[c * nodes + j];
            out[i * nodes + j] = s;
        }
    }
}

void variational_rhs_omp(const double* A, const double* B, const double* v, const double* vd,
                         int nb, int nodes, double* out) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < nodes; ++j) {
        const double* Aj = A + static_cast<std::size_t>(j) * nb * nb;
        const double* Bj = B + static_cast<std::size_t>(j) * nb * nb;
        for (int i = 0; i < nb; ++i) {
            double s = 0.0;
            for (int c = 0; c < nb; ++c)
                s += Aj[i * nb + c] * v[c * nodes + j] + Bj[i * nb + c] * vd[c * nodes + j];
            out[i * nodes + j] = s;
        }
    }
}

void variational_rhs(const double* A, const double* B, const double* v, const double* vd, int nb,
                     int nodes, double* out) {
    if (parallel::enabled() && nodes >= kMinParallelNodes && parallel::workers() > 1)
        variational_rhs_omp(A, B, v, vd, nb, nodes, out);
    else
        variational_rhs_serial(A, B, v, vd, nb, nodes, out);
}

double max_abs_serial(const double* v, std::size_t len) {
    double m = 0.0;
    for (std::size_t i = 0; i < len; ++i) m = std::max(m, std::fabs(v[i]));
    return m;
}

double max_abs_omp(const double* v, std::size_t len) {
    double m = 0.0;
#pragma omp parallel for reduction(max : m) schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(len); ++i)
        m = std::max(m, std::fabs(v[i]));
    return m;
}

double max_abs(const double* v, std::size_t len) {
    if (parallel::enabled() && len >= 4 * kMinParallelNodes && parallel::workers() > 1)
        return max_abs_omp(v, len);
    return max_abs_serial(v, len);
}

}  // namespace pfde
