#ifndef QCLT_LATTICE_HPP
#define QCLT_LATTICE_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace qclt {

enum class LatticeKind { chain, ring, grid, custom };

// Finite metric space of sites. The metric is stored densely: every consumer
// does O(1) lookups and the geometry-only sizes stay small.
struct Lattice {
    LatticeKind kind = LatticeKind::custom;
    std::vector<std::size_t> extents;
    bool wrap = false;
    std::size_t N = 0;
    std::vector<int> metric; // N*N, d(i,j)

    int d(std::size_t i, std::size_t j) const { return metric[i * N + j]; }

    std::string kind_name() const;
    std::string to_json() const;
};

struct DimensionCertificate {
    int D = 1;
    double c_D = 0.0;
    // max_shell_counts[l-1] = max over sites j of |{i : d(i,j) = l}|
    std::vector<std::size_t> max_shell_counts;
};

// kind chain/ring: extents = {N}. kind grid: extents per axis, graph
// (Manhattan) distance, wrapping every axis when wrap=true. Rings are chains
// with wrap.
Lattice build_lattice(LatticeKind kind, const std::vector<std::size_t>& extents, bool wrap);

// Custom lattice from an explicit metric (row-major N*N). Validated:
// symmetry, zero diagonal, triangle inequality.
Lattice custom_lattice(std::size_t N, const std::vector<int>& metric);

// Exhaustive shell count certificate. D is the geometric dimension for the
// built-in kinds; for custom lattices the smallest D >= 1 whose per-shell
// ratio count/l^{D-1} peaks at l = 1 (capped at D = 3). c_D is the exact
// empirical maximum of count/l^{D-1} over all sites and shells l >= 1.
DimensionCertificate dimension_certificate(const Lattice& lat);

// min over (a in A, b in B) of d(a, b).
int set_distance(const Lattice& lat, const std::vector<std::size_t>& A,
                 const std::vector<std::size_t>& B);

} // namespace qclt

#endif
