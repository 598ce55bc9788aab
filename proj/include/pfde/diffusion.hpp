#pragma once

#include <span>
#include <vector>

#include "pfde/problem.hpp"

namespace pfde {

struct Tridiag {
    std::vector<double> lo, di, up;  // lo[0] and up[last] unused

    int size() const { return static_cast<int>(di.size()); }
};

// Prefactored Thomas elimination for a fixed tridiagonal matrix; solve() is
// O(nodes) per right-hand side and reusable across steps and workers.
class ThomasFactor {
public:
    ThomasFactor() = default;
    explicit ThomasFactor(const Tridiag& m);

    // In-place solve M x = rhs.
    void solve(std::span<double> rhs) const;

private:
    std::vector<double> lo_, cp_, inv_;  // lower band, normalized upper, 1/pivot
};

// Second-order central-difference d_i * Laplacian per species with the
// species' boundary closure, plus the cached factorization of
// (Id - h/2 * stencil) for the implicit Crank-Nicolson stage.
//
// Dirichlet: boundary rows pinned to zero (value held at 0 by the solver).
// Neumann/Robin: ghost-node elimination,
//   row_0 = d * (2(u_1 - u_0)/dx^2 - 2 alpha_L u_0 / dx),   alpha_L = 0 for Neumann.
class DiscreteDiffusionOperator {
public:
    DiscreteDiffusionOperator() = default;
    explicit DiscreteDiffusionOperator(const ProblemSpec& p);

    int species() const { return static_cast<int>(stencil_.size()); }
    int nodes() const { return nodes_; }
    double time_step() const { return h_; }

    const Tridiag& stencil(int i) const { return stencil_[i]; }
    BoundaryKind kind(int i) const { return kind_[i]; }

    // out = L_i u
    void apply(int i, std::span<const double> u, std::span<double> out) const;

    // out = (Id + h/2 L_i) u, the explicit Crank-Nicolson half.
    void cn_rhs(int i, std::span<const double> u, std::span<double> out) const;

    // Solves (Id - h/2 L_i) x = rhs in place. For Dirichlet species the
    // boundary entries of rhs are forced to zero first.
    void cn_solve(int i, std::span<double> rhs) const;

private:
    int nodes_ = 0;
    double h_ = 0.0;
    std::vector<Tridiag> stencil_;
    std::vector<ThomasFactor> factor_;
    std::vector<BoundaryKind> kind_;
};

ProblemPtr share(ProblemSpec p);

// Single source for the operator used by one problem instance: building it is
// cheap but repeated factorization in inner loops is not.
DiscreteDiffusionOperator build_operator(const ProblemSpec& p);

}  // namespace pfde
