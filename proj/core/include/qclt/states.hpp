#ifndef QCLT_STATES_HPP
#define QCLT_STATES_HPP

#include "qclt/lattice.hpp"
#include "qclt/matrix.hpp"
#include "qclt/operators.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace qclt {

// Product or dense density matrix over N qubit sites. Gibbs states are dense
// with a tag recording their origin.
struct QuantumState {
    enum class Rep { product, dense };
    Rep rep = Rep::product;
    std::size_t N = 0;
    std::vector<Matrix> factors; // product representation
    Matrix rho;                  // dense representation
    bool gibbs = false;
    double beta = 0.0;

    bool is_maximally_mixed() const;
    Matrix dense() const; // materializes the product form if needed
};

enum class DecayModel { uncorrelated, exponential, algebraic };
enum class PrefactorConvention { with_min_support, without };

// Upper envelope alpha(r) on normalized connected correlators:
//   exponential: alpha(r) = L0 * exp(-r / xi)
//   algebraic:   alpha(r) = L0 * r^{-p}   (p stored in power)
struct DecayFit {
    DecayModel model = DecayModel::uncorrelated;
    double L0 = 0.0;
    double xi = 0.0;
    double power = 0.0;
    double residual = 0.0; // max relative excess of samples over the raw fit
    PrefactorConvention convention = PrefactorConvention::with_min_support;

    double alpha(double r) const;
    std::string to_json() const;
};

QuantumState product_state(const std::vector<Matrix>& factors);
QuantumState dense_state(const Matrix& rho, std::size_t N);
QuantumState gibbs_state(const Matrix& H, double beta, std::size_t N);
QuantumState maximally_mixed(std::size_t N);

cplx expectation(const QuantumState& state, const LocalOperator& op);
cplx expectation_full(const QuantumState& state, const Matrix& full);

// operator product A*B evaluated on the union support
LocalOperator local_product(const LocalOperator& A, const LocalOperator& B);

// |<AB> - <A><B>|
double connected_correlator(const QuantumState& state, const LocalOperator& A,
                            const LocalOperator& B);

// Envelope fit of correlation decay over a probe family (default: all
// single-site Paulis). L0 is inflated after the least-squares fit so that no
// sampled point exceeds the returned alpha.
DecayFit fit_alpha(const QuantumState& state, const Lattice& lat, DecayModel model,
                   PrefactorConvention convention = PrefactorConvention::with_min_support,
                   const std::vector<LocalOperator>* probe_family = nullptr);

} // namespace qclt

#endif
