#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pfde/spectrum.hpp"

namespace pfde {

// n x n nonnegative coupling matrix with zero diagonal: entry (i,j) is the
// sampled sup of a_ij plus the sampled sup of b_ij over K and the mesh (two
// separate sups, then the sum). Provenance records where each sup was attained
// so users can refine the sampling.
struct InteractionMatrix {
    int n = 0;
    std::vector<double> entry;  // row-major, diagonal exactly 0

    struct Provenance {
        int sample_count = 0;
        int argmax_sample = -1;       // sample id where max(a_ij + b_ij sups) occurred
        int argmax_node = -1;
        bool at_window_boundary = false;  // argmax at the first/last omega-limit sample
    };
    std::vector<Provenance> prov;

    double at(int i, int j) const { return entry[static_cast<std::size_t>(i) * n + j]; }
    double max_entry() const;
    // Entries count as edges when > 1e-10 * (1 + max entry).
    double edge_threshold() const { return 1e-10 * (1.0 + max_entry()); }
};

InteractionMatrix interaction_matrix(const SampledK& K);
InteractionMatrix interaction_matrix(ProblemPtr p, const KSampler& sampler);

// Strong connectivity of the directed graph with an edge i -> j when
// M_ij > threshold; n = 1 is irreducible by convention.
bool is_irreducible(const InteractionMatrix& M);
bool is_irreducible_dense(const std::vector<double>& entries, int n, double threshold);

// Permutation of the species into block lower triangular form with
// irreducible diagonal blocks (strongly connected components of the coupling
// graph, condensation ordered so every cross-block entry lies below the block
// diagonal). I holds blocks whose row has no other nonzero block; J those
// whose column has no other nonzero block. Blocks are 0-based here; reports
// print them 1-based.
struct BlockStructure {
    std::vector<int> perm;                 // new position -> original species
    std::vector<std::vector<int>> blocks;  // original species indices per block
    std::vector<int> block_sizes;
    std::vector<int> I, J;

    int k() const { return static_cast<int>(blocks.size()); }
    int block_of(int original_species) const;
};

BlockStructure block_triangularize(const InteractionMatrix& M);

struct Verdict {
    bool uniformly_persistent = false;
    bool strictly_persistent_at_zero = false;
    std::optional<std::string> inconclusive_reason;
    double tol = 1e-2;
};

// Theorem-style rule: uniform persistence needs every block in I to have
// spectrum lower bound > tol; strict persistence at 0 needs the same for J.
// A needed lower bound inside [-tol, tol] makes the verdict inconclusive.
// Spectra may be supplied for any superset of I union J.
Verdict classify_persistence(const BlockStructure& bs, const std::vector<SpectrumEstimate>& spectra,
                             double tol);

struct PersistenceWitness {
    int trial = 0;
    double phi0_value = 0.0;
    bool blowup = false;
    // componentwise infimum over interior nodes and late snapshots
    std::vector<double> late_infimum;
    double t0 = 0.0;  // earliest snapshot time from which z_t >= late_infimum held
    bool positive = false;
};

struct PersistenceReport {
    std::vector<PersistenceWitness> uniform_trials;  // from phi >> 0
    std::vector<PersistenceWitness> strict_trials;   // single-component phi(0) > 0
    bool failed_witness = false;  // verdict claimed persistence but a late infimum was <= 0
};

// Simulation cross-check of a verdict for K = Omega x {0}: integrates from
// small strongly positive data (and single-component positive data) and
// reports measured late-time lower bounds.
PersistenceReport empirical_persistence(ProblemPtr p, const BlockStructure& bs,
                                        const Verdict& verdict, int trials, double T,
                                        std::uint64_t seed);

}  // namespace pfde
