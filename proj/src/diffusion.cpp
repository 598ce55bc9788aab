#include "pfde/diffusion.hpp"

#include <cassert>

namespace pfde {

ThomasFactor::ThomasFactor(const Tridiag& m) {
    const int n = m.size();
    lo_.resize(n);
    cp_.resize(n);
    inv_.resize(n);
    double piv = m.di[0];
    inv_[0] = 1.0 / piv;
    cp_[0] = m.up[0] * inv_[0];
    for (int i = 1; i < n; ++i) {
        lo_[i] = m.lo[i];
        piv = m.di[i] - m.lo[i] * cp_[i - 1];
        inv_[i] = 1.0 / piv;
        cp_[i] = m.up[i] * inv_[i];
    }
}

void ThomasFactor::solve(std::span<double> rhs) const {
    const int n = static_cast<int>(inv_.size());
    rhs[0] *= inv_[0];
    for (int i = 1; i < n; ++i) rhs[i] = (rhs[i] - lo_[i] * rhs[i - 1]) * inv_[i];
    for (int i = n - 2; i >= 0; --i) rhs[i] -= cp_[i] * rhs[i + 1];
}

DiscreteDiffusionOperator::DiscreteDiffusionOperator(const ProblemSpec& p) {
    nodes_ = p.nodes();
    h_ = p.h();
    const double dx = p.mesh.dx();
    const double inv_dx2 = 1.0 / (dx * dx);
    stencil_.resize(p.n);
    factor_.resize(p.n);
    kind_.resize(p.n);
    for (int i = 0; i < p.n; ++i) {
        const double d = p.diffusion[i];
        const SpeciesBoundary& bc = p.boundary.species[i];
        kind_[i] = bc.kind;
        Tridiag L;
        L.lo.assign(nodes_, 0.0);
        L.di.assign(nodes_, 0.0);
        L.up.assign(nodes_, 0.0);
        for (int j = 1; j < nodes_ - 1; ++j) {
            L.lo[j] = d * inv_dx2;
            L.di[j] = -2.0 * d * inv_dx2;
            L.up[j] = d * inv_dx2;
        }
        switch (bc.kind) {
            case BoundaryKind::Dirichlet:
                // rows stay zero; values pinned by cn_solve
                break;
            case BoundaryKind::Neumann:
                L.di[0] = -2.0 * d * inv_dx2;
                L.up[0] = 2.0 * d * inv_dx2;
                L.lo[nodes_ - 1] = 2.0 * d * inv_dx2;
                L.di[nodes_ - 1] = -2.0 * d * inv_dx2;
                break;
            case BoundaryKind::Robin:
                L.di[0] = -2.0 * d * inv_dx2 - 2.0 * bc.robin_alpha_left * d / dx;
                L.up[0] = 2.0 * d * inv_dx2;
                L.lo[nodes_ - 1] = 2.0 * d * inv_dx2;
                L.di[nodes_ - 1] = -2.0 * d * inv_dx2 - 2.0 * bc.robin_alpha_right * d / dx;
                break;
        }
        Tridiag M;  // Id - h/2 L, with identity rows where L rows are pinned
        M.lo.assign(nodes_, 0.0);
        M.di.assign(nodes_, 1.0);
        M.up.assign(nodes_, 0.0);
        for (int j = 0; j < nodes_; ++j) {
            M.lo[j] -= 0.5 * h_ * L.lo[j];
            M.di[j] -= 0.5 * h_ * L.di[j];
            M.up[j] -= 0.5 * h_ * L.up[j];
        }
        stencil_[i] = std::move(L);
        factor_[i] = ThomasFactor(M);
    }
}

void DiscreteDiffusionOperator::apply(int i, std::span<const double> u,
                                      std::span<double> out) const {
    const Tridiag& L = stencil_[i];
    const int n = nodes_;
    out[0] = L.di[0] * u[0] + L.up[0] * u[1];
    for (int j = 1; j < n - 1; ++j)
        out[j] = L.lo[j] * u[j - 1] + L.di[j] * u[j] + L.up[j] * u[j + 1];
    out[n - 1] = L.lo[n - 1] * u[n - 2] + L.di[n - 1] * u[n - 1];
}

void DiscreteDiffusionOperator::cn_rhs(int i, std::span<const double> u,
                                       std::span<double> out) const {
    const Tridiag& L = stencil_[i];
    const double s = 0.5 * h_;
    const int n = nodes_;
    out[0] = u[0] + s * (L.di[0] * u[0] + L.up[0] * u[1]);
    for (int j = 1; j < n - 1; ++j)
        out[j] = u[j] + s * (L.lo[j] * u[j - 1] + L.di[j] * u[j] + L.up[j] * u[j + 1]);
    out[n - 1] = u[n - 1] + s * (L.lo[n - 1] * u[n - 2] + L.di[n - 1] * u[n - 1]);
}

void DiscreteDiffusionOperator::cn_solve(int i, std::span<double> rhs) const {
    if (kind_[i] == BoundaryKind::Dirichlet) {
        rhs[0] = 0.0;
        rhs[nodes_ - 1] = 0.0;
    }
    factor_[i].solve(rhs);
}

ProblemPtr share(ProblemSpec p) { return std::make_shared<const ProblemSpec>(std::move(p)); }

DiscreteDiffusionOperator build_operator(const ProblemSpec& p) {
    return DiscreteDiffusionOperator(p);
}

}  // namespace pfde
