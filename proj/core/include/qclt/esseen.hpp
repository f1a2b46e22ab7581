#ifndef QCLT_ESSEEN_HPP
#define QCLT_ESSEEN_HPP

#include "qclt/spectral.hpp"

#include <functional>
#include <string>
#include <vector>

namespace qclt {

struct EsseenConfig {
    double C = 3.05; // smoothing-lemma constant 24/(pi*sqrt(2*pi)), rounded up
    double Omega = 1.0;
    double quadrature_tol = 1e-9;
};

// Band-limited filter kernel pair. k_hat is the triangle on [-1,1]; h_hat is
// the normalized self-convolution of k_hat at argument 2*omega, evaluated in
// closed form as a scaled cubic B-spline.
struct KernelValues {
    double K = 0.0;
    double H = 0.0;
    double k_hat = 0.0;
    double h_hat = 0.0;
};
KernelValues kernel_values(double y, double omega);
double kernel_K(double y);
double kernel_H(double y);
double kernel_k_hat(double omega);
double kernel_h_hat(double omega);

// quadrature of int H and b = int |y| H over the real line (even integrands;
// finite tail estimate beyond the cutoff)
double kernel_H_integral();
double kernel_b();

// C/Omega + (2/pi) * integral_0^Omega |phi(w) - exp(-w^2/2)|/w dw, adaptive
// Simpson to quadrature_tol. The w=0 endpoint is the series limit 0 for
// standardized measures.
double esseen_rhs(const std::function<cplx(double)>& phi, const EsseenConfig& cfg);
double esseen_rhs(const SpectralMeasure& standardized, const EsseenConfig& cfg);
// Curve-based variant: integrates the piecewise-linear interpolant of the
// integrand over the curve's grid; the grid must cover (0, Omega].
double esseen_rhs(const CharacteristicCurve& curve, const EsseenConfig& cfg);

struct EsseenSweepEntry {
    double omega = 0.0;
    double rhs = 0.0;
};
struct EsseenReport {
    double delta = 0.0;
    std::vector<EsseenSweepEntry> sweep;
    double min_rhs = 0.0;
    bool holds = false;
    double C = 0.0;
    double empirical_min_C = 0.0; // smallest C making the inequality hold across the sweep

    std::string to_json() const;
};
EsseenReport verify_esseen(const SpectralMeasure& standardized,
                           const std::vector<double>& omega_sweep, const EsseenConfig& cfg);

} // namespace qclt

#endif
