#ifndef QCLT_SPECTRAL_HPP
#define QCLT_SPECTRAL_HPP

#include "qclt/matrix.hpp"
#include "qclt/operators.hpp"
#include "qclt/states.hpp"

#include <cstddef>
#include <vector>

namespace qclt {

// Discrete energy law: atoms (eigenvalue, weight), sorted by eigenvalue with
// degenerate levels merged.
struct SpectralMeasure {
    std::vector<double> energies;
    std::vector<double> weights;
    double mu = 0.0;
    double sigma = 0.0;

    std::size_t size() const { return energies.size(); }
    cplx phi(double omega) const; // characteristic function at one point
};

struct CharacteristicCurve {
    enum class Path { eigen_sum, evolution };
    std::vector<double> grid;
    std::vector<cplx> values;
    Path path = Path::eigen_sum;
};

// Full eigendecomposition of Hermitian H with weights <n|rho|n>. Degeneracies
// within 1e-10 * ||H|| are merged (weighted-mean representative).
SpectralMeasure spectral_measure(const Matrix& H, const QuantumState& state);

// Fast path for mutually diagonal (computational-basis) terms and product rho:
// windowed dynamic program over sites on a common energy grid. Agrees with
// spectral_measure wherever both apply.
SpectralMeasure fast_commuting_measure(const HamiltonianModel& model, const QuantumState& state);

// (e - mu)/sigma; variance_ok reports sigma^2 >= c0 E^2 N.
struct StandardizedMeasure {
    SpectralMeasure measure;
    bool variance_ok = false;
};
StandardizedMeasure standardize(const SpectralMeasure& m, double c0, double E, std::size_t N);

double gaussian_cdf(double y);

// sup_y |F(y) - G(y)| from the exact step structure of F.
double kolmogorov_distance(const SpectralMeasure& standardized);

CharacteristicCurve characteristic_function(const SpectralMeasure& m,
                                            const std::vector<double>& grid);
CharacteristicCurve characteristic_function_evolution(const QuantumState& state,
                                                      const Matrix& H_std,
                                                      const std::vector<double>& grid);

// Third-order cumulant remainder check for product-state measures. The log is
// unwrapped continuously along the grid starting from log phi(0) = 0.
struct CumulantPoint {
    double omega = 0.0;
    bool in_window = false;
    double lhs = 0.0; // |log phi + omega^2/2|
    double rhs = 0.0;
    bool violation = false;
};
// omega_star = 1/(2 e^2 R^{2D} (R^{2D}+1) E); R below 1 is evaluated at 1
// (a locality radius may always be enlarged).
double omega_star(double R, double D, double E);
std::vector<CumulantPoint> cumulant_window_check(const SpectralMeasure& standardized,
                                                 double sigma_H, std::size_t N, double E,
                                                 double R, double D,
                                                 const std::vector<double>& grid);

} // namespace qclt

#endif
