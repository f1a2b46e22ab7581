#ifndef QCLT_DECOMPOSITION_HPP
#define QCLT_DECOMPOSITION_HPP

#include "qclt/lattice.hpp"
#include "qclt/matrix.hpp"
#include "qclt/operators.hpp"
#include "qclt/states.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace qclt {

// Distance shells of the standardized Hamiltonian around an anchor site.
// tails[m] sums centered terms with d(anchor_k, j) > 2*R*l*m (tails[0] is the
// whole standardized Hamiltonian); layers[m] = tails[m-1] - tails[m].
struct ShellDecomposition {
    std::size_t j = 0;
    std::size_t N = 0;
    long l = 0;
    long K = 0;
    double R = 0.0;
    double sigma_H = 0.0;
    std::vector<Matrix> tails;  // m = 0..K
    std::vector<Matrix> layers; // index m = 1..K stored at [m]
    Matrix h_anchor;            // centered terms anchored at j, unscaled
};

ShellDecomposition shell_hamiltonians(const HamiltonianModel& model, const QuantumState& state,
                                      const Lattice& lat, std::size_t j, long l, long K,
                                      double sigma_H);

// zeta(w) = e^{iw(X+Y)} e^{-iwX} e^{-iwY}
Matrix zeta_exact(const Matrix& X, const Matrix& Y, double omega);

// Truncated Taylor series of zeta with the derivative table built from the
// nested-commutator recursion (memoized [Y,[X,Y]_m]_{k-m}; never finite
// differences).
struct ConjugationSeries {
    Matrix X, Y;
    long M = 0;
    std::vector<Matrix> derivative_table; // zeta^{(n)}(0), n = 0..M
    double lambda = 0.0;                  // 2 c_D (2R)^D B
    double gamma = 1.0;                   // max{1, C_{XY} / (4 c_D (2R)^D)}
    std::size_t C_XY = 0;                 // |supp([X,Y])|

    Matrix eval(double omega) const;              // zeta^M(omega)
    Matrix derivative(double omega, long k) const; // d^k/dw^k zeta^M(omega)
};

// Geometry inputs for the series norm constants; B is the max local term norm.
struct ClusterContext {
    int D = 1;
    double c_D = 2.0;
    double R = 1.0;
    double B = 1.0;
    std::size_t N = 0; // qubit count of the dense matrices
};

ConjugationSeries zeta_truncated(const Matrix& X, const Matrix& Y, long M,
                                 const ClusterContext* ctx = nullptr);

// Truncated conjugation corrections for layer m of a shell decomposition:
// first component uses (X, Y) = (-tails[m-1], tails[m]), second (-tails[m], H).
struct RSPair {
    ConjugationSeries R;
    ConjugationSeries S;
};
RSPair rs_truncations(const ShellDecomposition& dec, long m, long M);

// All per-anchor operators and scalars entering the characteristic-function
// ODE at one frequency.
struct LemmaTermSet {
    std::vector<Matrix> xi;  // m = 0..K (xi[0] = I)
    std::vector<Matrix> Xi;  // m = 1..K at [m]
    std::vector<Matrix> gam; // m = 1..K at [m]
    std::vector<Matrix> Gam; // m = 1..K at [m]
    cplx eta1{}, eta2{}, eta3{};
    cplx nu1{}, nu2{}, nu3{}, nu4{}, nu5{};
    cplx eta_site{}; // exact per-site eta contribution (closed form)
    cplx nu_site{};
    double omega = 0.0;
    long l = 0, M = 0, K = 0;
};

LemmaTermSet lemma_terms(const QuantumState& rho, const ShellDecomposition& dec, long M, long K,
                         double omega);

// eta(w), nu(w) summed over all anchors, with the i/sigma_H prefactor applied.
struct OdeTerms {
    cplx eta{};
    cplx nu{};
};
OdeTerms assemble_eta_nu(const QuantumState& rho, const HamiltonianModel& model,
                         const Lattice& lat, long l, long M, long K, double sigma_H,
                         double omega);

// max over the grid of |phi'(w) - (-w + eta(w)) phi(w) - nu(w)|; phi' on the
// eigenvalue path.
struct OdeResidualReport {
    double max_residual = 0.0;
    double max_scale = 0.0; // max (1 + |phi'|) where the max residual occurred
    std::vector<double> residuals;
};
OdeResidualReport verify_ode_residual(const QuantumState& rho, const HamiltonianModel& model,
                                      const Lattice& lat, long l, long M, long K,
                                      const std::vector<double>& omega_grid);

// Brute-force certification of the series norm/support/window claims. Bound
// violations are reported, never thrown.
struct CertificateCheck {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    bool holds = false;
};
struct CertificateReport {
    double lambda = 0.0;
    double gamma = 1.0;
    std::size_t C_XY = 0;
    std::vector<CertificateCheck> checks;
    bool all_hold = true;

    std::string to_json() const;
};
CertificateReport cluster_certificates(const std::vector<Term>& X_terms,
                                       const std::vector<Term>& Y_terms, const Lattice& lat,
                                       int D, double c_D, int n_max, long M,
                                       const std::vector<double>& omega_grid);

} // namespace qclt

#endif
