#pragma once

#include <cstddef>

#include "pfde/driver.hpp"
#include "pfde/mesh.hpp"
#include "pfde/reaction.hpp"

namespace pfde {

// Data-parallel inner loops of the integrators. Each kernel has a serial
// reference and an OpenMP variant; the dispatcher picks the OpenMP path when
// parallel::enabled() and the work is large enough to pay for the fork.
// Both paths produce bitwise-identical results (independent writes, no
// floating-point reordering), which the kernel tests assert.

// f(omega, x_j, ynew(:,j), ydel(:,j)) for every node j; fields are species-major
// (species * nodes + node). Writes n * nodes values into f_out.
void reaction_profile_serial(const ReactionTerm& r, const DriverState& omega, const Mesh1D& mesh,
                             const double* ynew, const double* ydel, int nodes, double* f_out);
void reaction_profile_omp(const ReactionTerm& r, const DriverState& omega, const Mesh1D& mesh,
                          const double* ynew, const double* ydel, int nodes, double* f_out);
void reaction_profile(const ReactionTerm& r, const DriverState& omega, const Mesh1D& mesh,
                      const double* ynew, const double* ydel, int nodes, double* f_out);

// Frozen-coefficient linear reaction: out(:,j) = A_j v(:,j) + B_j vd(:,j)
// with A, B stored per node as nb x nb row-major blocks.
void variational_rhs_serial(const double* A, const double* B, const double* v, const double* vd,
                            int nb, int nodes, double* out);
void variational_rhs_omp(const double* A, const double* B, const double* v, const double* vd,
                         int nb, int nodes, double* out);
void variational_rhs(const double* A, const double* B, const double* v, const double* vd,
                     int nb, int nodes, double* out);

double max_abs_serial(const double* v, std::size_t len);
double max_abs_omp(const double* v, std::size_t len);
double max_abs(const double* v, std::size_t len);

}  // namespace pfde
