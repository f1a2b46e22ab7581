#ifndef QCLT_BOUNDS_HPP
#define QCLT_BOUNDS_HPP

#include "qclt/states.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace qclt {

struct ModelParams {
    std::size_t N = 0;
    int D = 1;
    double c_D = 2.0;
    double R = 1.0;
    double E = 1.0;
    double c0 = 0.5;
    double sigma_H = 0.0;
    DecayFit decay;
    bool commuting = false;
};

struct ConstantTable {
    double Gamma = 0.0;
    double s_Dm1 = 0.0;   // s_{D-1}
    double s_2Dm1 = 0.0;  // s_{2(D-1)}
    double s_3Dm1 = 0.0;  // s_{3(D-1)}
    double B1 = 0.0, B2 = 0.0, B3 = 0.0, B4 = 0.0, B5 = 0.0, B6 = 0.0;
    double Omega1 = 0.0, Omega2 = 0.0, Omega3 = 0.0;
    long l = 0, M = 0, K = 0;

    double omega_max() const; // min of the three windows
};

struct LemmaConstants {
    double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0, c5 = 0.0;
    double c3_tilde = 0.0;
};

enum class TheoremVariant { exponential, algebraic, algebraic_strong };

struct Precondition {
    std::string name;
    bool holds = false;
};

struct BoundReport {
    TheoremVariant variant = TheoremVariant::exponential;
    bool applicable = false;
    double delta_bound = 0.0;
    double Omega = 0.0;
    long l = 0, M = 0, K = 0;
    double delta_exponent = 0.0; // the N power in the headline rate
    std::vector<Precondition> validity;
    LemmaConstants constants;
    ConstantTable table;
    std::string note;

    std::string to_json() const;
};

// sum_{r>=l} alpha(r) (r+1)^{D-1} scaled by c_D; closed form / tail-bounded
// truncation depending on the decay model.
double c_alpha(const DecayFit& decay, int D, double c_D, double l);

// s_x = sum_{m>=0} (m+2)^x 2^{-m}, summed until the geometric tail bound is
// below 1e-14 of the partial sum.
double s_series(double x);

ConstantTable table_constants(const ModelParams& p, long l, long M, long K);

LemmaConstants lemma_c_constants(const ModelParams& p, const ConstantTable& t, long l, long M,
                                 long K);

// right side of the small-omega envelope on |phi - exp(-w^2/2)|; requires
// c1 < 1/2 and omega inside all three windows
double phi_envelope(double omega, const LemmaConstants& c, const ConstantTable& t);

// Kolmogorov-distance estimate from the envelope constants at cutoff Omega
double delta_estimate(const LemmaConstants& c, const ConstantTable& t, double Omega, double C);

// Full recipe: picks (l, M, K, Omega) for the decay model, evaluates the
// explicit rate function, and reports every precondition. A failed threshold
// yields applicable=false, never an exception; a bad epsilon throws.
BoundReport theorem_bound(const ModelParams& p, TheoremVariant variant, double eps, double C);

// Product-state bound.
BoundReport product_bound(const ModelParams& p, double C);

} // namespace qclt

#endif
