#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "pfde/common.hpp"

namespace pfde {

enum class Order { LEQ, GEQ, EQUAL, INCOMPARABLE };

// Delay-history state: M+1 spatial profiles at the grid times
// s_m = -1 + m/M, m = 0..M, each profile holding n species on nodes() mesh
// nodes. Layout: data[m][species][node], flattened.
class Segment {
public:
    Segment() = default;
    Segment(int n_species, int nodes, int delay_steps)
        : n_(n_species), nodes_(nodes), steps_(delay_steps),
          data_(static_cast<std::size_t>(delay_steps + 1) * n_species * nodes, 0.0) {}

    int species() const { return n_; }
    int nodes() const { return nodes_; }
    int delay_steps() const { return steps_; }
    std::size_t size() const { return data_.size(); }

    double& at(int m, int i, int j) { return data_[idx(m, i, j)]; }
    double at(int m, int i, int j) const { return data_[idx(m, i, j)]; }

    std::span<double> profile(int m, int i) {
        return {data_.data() + idx(m, i, 0), static_cast<std::size_t>(nodes_)};
    }
    std::span<const double> profile(int m, int i) const {
        return {data_.data() + idx(m, i, 0), static_cast<std::size_t>(nodes_)};
    }

    std::vector<double>& raw() { return data_; }
    const std::vector<double>& raw() const { return data_; }

    bool same_shape(const Segment& o) const {
        return n_ == o.n_ && nodes_ == o.nodes_ && steps_ == o.steps_;
    }

private:
    std::size_t idx(int m, int i, int j) const {
        return (static_cast<std::size_t>(m) * n_ + i) * nodes_ + j;
    }

    int n_ = 0, nodes_ = 0, steps_ = 0;
    std::vector<double> data_;
};

// Sup-norm over species, nodes and delay-grid times.
inline double segment_norm(const Segment& phi) {
    double m = 0.0;
    for (double v : phi.raw()) m = std::max(m, std::fabs(v));
    return m;
}

// Componentwise/nodewise order verdict over all stored profiles.
inline Order segment_compare(const Segment& phi, const Segment& psi) {
    if (!phi.same_shape(psi)) throw ConfigError("segment_compare: mismatched shapes");
    bool leq = true, geq = true;
    const auto& a = phi.raw();
    const auto& b = psi.raw();
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] > b[k]) leq = false;
        if (a[k] < b[k]) geq = false;
        if (!leq && !geq) return Order::INCOMPARABLE;
    }
    if (leq && geq) return Order::EQUAL;
    return leq ? Order::LEQ : Order::GEQ;
}

}  // namespace pfde
