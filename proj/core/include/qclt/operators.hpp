#ifndef QCLT_OPERATORS_HPP
#define QCLT_OPERATORS_HPP

#include "qclt/lattice.hpp"
#include "qclt/matrix.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace qclt {

// Operator acting on a subset of qubit sites; block is dense over the
// support's tensor factor (site order ascending, lower site = left factor).
struct LocalOperator {
    std::vector<std::size_t> support; // strictly ascending
    Matrix block;

    std::size_t dim() const { return block.rows(); }
};

struct Term {
    std::size_t anchor = 0;
    LocalOperator op;
};

struct HamiltonianModel {
    std::vector<Term> terms;
    std::size_t N = 0; // sites
    int R = 0;         // max distance anchor -> support site
    double E = 0.0;    // max term spectral norm
};

// Hilbert-space dimension cap (default 2^14); BE_LAB_DIM_CAP overrides.
std::size_t dim_cap();
void check_dim(std::size_t dim);

// Pauli helpers.
Matrix pauli(char p); // I, X, Y, Z
LocalOperator pauli_string(const std::vector<std::size_t>& sites, const std::string& paulis,
                           cplx coeff = 1.0);

// A (x) identity on the rest, site order ascending over N qubit sites.
Matrix embed(const LocalOperator& op, std::size_t N);

// Model from a term list; computes R and E, validates supports.
HamiltonianModel build_hamiltonian(const std::vector<Term>& terms, const Lattice& lat);
Matrix dense_hamiltonian(const HamiltonianModel& model);

// Sites where a full-space operator acts nontrivially, decided by commutation
// against the single-site X and Z generators; tolerance 1e-12 * max entry.
std::vector<std::size_t> exact_support(const Matrix& full, std::size_t N);

// Compress a full-space operator onto a given support (must act trivially
// elsewhere): block = partial trace over the complement / its dimension.
LocalOperator reduce_to_support(const Matrix& full, std::size_t N,
                                const std::vector<std::size_t>& support);

// [A,B]_0 = B, [A,B]_{n+1} = [A, [A,B]_n]; evaluated on the union support and
// recompressed to the exact support of the result.
LocalOperator nested_commutator(const LocalOperator& A, const LocalOperator& B, int n);

} // namespace qclt

#endif
