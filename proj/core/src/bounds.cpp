#include "qclt/bounds.hpp"

#include "qclt/errors.hpp"
#include "qclt/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace qclt {

namespace {

constexpr double pi = std::numbers::pi;
const double log2_ = std::numbers::ln2;

double pow_l(double b, double e) { return std::pow(b, e); }

void require_geometry(const ModelParams& p) {
    if (p.N == 0) throw invalid_parameter("bounds: N must be positive");
    if (p.D < 1) throw invalid_parameter("bounds: D must be at least 1");
    if (p.c_D <= 0.0 || p.R <= 0.0 || p.E <= 0.0 || p.c0 <= 0.0)
        throw invalid_parameter("bounds: c_D, R, E, c0 must be positive");
    if (p.sigma_H <= 0.0) throw degenerate_spectrum("bounds: sigma_H must be positive");
}

std::string variant_name(TheoremVariant v) {
    switch (v) {
    case TheoremVariant::exponential: return "exponential";
    case TheoremVariant::algebraic: return "algebraic";
    case TheoremVariant::algebraic_strong: return "algebraic_strong";
    }
    return "?";
}

} // namespace

double s_series(double x) {
    double sum = 0.0;
    double w = 1.0; // 2^{-m}
    for (long m = 0;; ++m, w *= 0.5) {
        sum += std::pow(static_cast<double>(m + 2), x) * w;
        // for m >= x the ratio of consecutive terms is below (1 + 1/(m+2))^x / 2;
        // once that is <= 3/4 the tail is bounded by 4x the next term
        if (m > x + 4.0) {
            const double next = std::pow(static_cast<double>(m + 3), x) * w * 0.5;
            if (4.0 * next <= 1e-14 * sum) break;
        }
        if (m > 10000) break;
    }
    return sum;
}

double c_alpha(const DecayFit& decay, int D, double c_D, double l) {
    if (l < 0.0) throw invalid_parameter("c_alpha: negative distance");
    const long l0 = static_cast<long>(std::ceil(std::max(1.0, l)));
    switch (decay.model) {
    case DecayModel::uncorrelated:
        return 0.0;
    case DecayModel::exponential: {
        if (decay.xi <= 0.0) throw invalid_parameter("c_alpha: decay length must be positive");
        const double q = std::exp(-1.0 / decay.xi);
        if (D == 1) // plain geometric series
            return c_D * decay.L0 * std::exp(-l0 / decay.xi) / (1.0 - q);
        double sum = 0.0;
        for (long r = l0;; ++r) {
            const double term = std::exp(-r / decay.xi) * pow_l(r + 1.0, D - 1);
            sum += term;
            // tail <= term * sum_{k>=1} q^k ((r+1+k)/(r+1))^{D-1}; once the
            // per-step ratio is <= (1+q)/2 the tail is geometric
            const double ratio = q * pow_l((r + 2.0) / (r + 1.0), D - 1);
            if (ratio < 1.0) {
                const double tail = term * ratio / (1.0 - ratio);
                if (tail <= 1e-13 * sum) { sum += tail; break; }
            }
            if (r > l0 + 2000000) throw resource_limit("c_alpha: series did not converge");
        }
        return c_D * decay.L0 * sum;
    }
    case DecayModel::algebraic: {
        const double pwr = decay.power; // alpha(r) = L0 r^{-pwr}
        if (pwr <= static_cast<double>(D))
            throw invalid_parameter("c_alpha: algebraic decay too slow, series diverges");
        // Expand (r+1)^{D-1} binomially so each component is a pure power
        // sum_{r>=R} r^{-s}; evaluate those tails with an Euler-Maclaurin
        // expansion (error bounded by the first omitted term).
        auto power_tail = [](double s, double R, double& err) {
            const double t0 = std::pow(R, 1.0 - s) / (s - 1.0);
            const double t1 = 0.5 * std::pow(R, -s);
            const double t2 = s / 12.0 * std::pow(R, -s - 1.0);
            const double t3 =
                s * (s + 1.0) * (s + 2.0) / 720.0 * std::pow(R, -s - 3.0);
            err = s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) / 30240.0 *
                  std::pow(R, -s - 5.0);
            return t0 + t1 + t2 - t3;
        };
        std::vector<double> binom(static_cast<std::size_t>(D), 0.0);
        binom[0] = 1.0;
        for (int j = 1; j < D; ++j)
            binom[static_cast<std::size_t>(j)] =
                binom[static_cast<std::size_t>(j - 1)] * (D - j) / j;
        double sum = 0.0;
        for (long r = l0;; ++r) {
            const double term = pow_l(static_cast<double>(r), -pwr) * pow_l(r + 1.0, D - 1);
            sum += term;
            const double R = static_cast<double>(r) + 1.0;
            double tail = 0.0, err = 0.0;
            for (int j = 0; j < D; ++j) {
                double e = 0.0;
                tail += binom[static_cast<std::size_t>(j)] *
                        power_tail(pwr - j, R, e);
                err += binom[static_cast<std::size_t>(j)] * e;
            }
            if (err <= 1e-13 * (sum + tail)) { sum += tail; break; }
            if (r > l0 + 1000000) throw resource_limit("c_alpha: series did not converge");
        }
        return c_D * decay.L0 * sum;
    }
    }
    throw invalid_parameter("c_alpha: unknown decay model");
}

double ConstantTable::omega_max() const { return std::min({Omega1, Omega2, Omega3}); }

ConstantTable table_constants(const ModelParams& p, long l, long M, long K) {
    require_geometry(p);
    (void)M;
    ConstantTable t;
    t.l = l;
    t.M = M;
    t.K = K;
    const double D = p.D;
    const double twoR_D = pow_l(2.0 * p.R, D);
    const double cd2R = p.c_D * twoR_D;
    t.Gamma = std::max(4.0 * cd2R, 2.0 * p.c_D * cd2R);
    t.s_Dm1 = s_series(D - 1.0);
    t.s_2Dm1 = s_series(2.0 * (D - 1.0));
    t.s_3Dm1 = s_series(3.0 * (D - 1.0));
    const double b1root = cd2R + std::sqrt(2.0) * t.Gamma;
    t.B1 = b1root * b1root;
    t.B2 = 2.0 * (cd2R + t.Gamma);
    t.B3 = 2.0 * (cd2R + pow_l(2.0, (D - 1.0) / 2.0) * t.Gamma);
    t.B4 = t.B1 + t.B3 * t.B3 * (1.0 + 2.0 * t.s_2Dm1);
    t.B5 = 12.0 * t.B2 * t.B2 * pow_l(p.R, D / 2.0) *
           std::sqrt(1.0 + c_alpha(p.decay, p.D, p.c_D, 1.0)) * t.s_3Dm1;
    t.B6 = p.commuting ? 0.0 : t.Gamma * t.Gamma * t.s_Dm1;
    const double ld = static_cast<double>(l), kd = static_cast<double>(K);
    t.Omega1 = p.sigma_H /
               (2.0 * p.E * t.Gamma * pow_l(ld, D / 2.0) * pow_l(kd, (D - 1.0) / 2.0));
    t.Omega2 = p.sigma_H / (2.0 * t.B2 * p.E * pow_l(ld, D) * pow_l(kd, D - 1.0));
    t.Omega3 = p.c0 * p.sigma_H / (4.0 * t.B4 * p.E * pow_l(ld, 2.0 * D));
    return t;
}

LemmaConstants lemma_c_constants(const ModelParams& p, const ConstantTable& t, long l, long M,
                                 long K) {
    require_geometry(p);
    std::vector<std::string> failed;
    if (K <= 1) failed.push_back("K > 1");
    if (l <= 1) failed.push_back("l > 1");
    if (M < 1) failed.push_back("M >= 1");
    if (l - M < 1) failed.push_back("l - M >= 1");
    if (2.0 * p.R * static_cast<double>(l) * static_cast<double>(K) >
        static_cast<double>(p.N))
        failed.push_back("2*R*l*K <= N");
    if (!failed.empty()) throw window_violation("lemma constants: preconditions failed", failed);

    const double D = p.D, ld = static_cast<double>(l), kd = static_cast<double>(K);
    const double rootN = std::sqrt(static_cast<double>(p.N));
    LemmaConstants c;
    c.c1 = pow_l(2.0 * p.R, D) / p.c0 * c_alpha(p.decay, p.D, p.c_D, 2.0 * p.R * (ld - 1.0));
    c.c2 = t.B4 / pow_l(p.c0, 1.5) * pow_l(ld, 2.0 * D) / rootN;
    c.c3 = 8.0 * p.R / std::sqrt(p.c0) * rootN * ld *
           p.decay.alpha(2.0 * p.R * (ld - static_cast<double>(M) - 1.0));
    c.c3_tilde = c.c3 / (4.0 * p.R * ld);
    c.c4 = t.B2 / p.c0 * pow_l(ld, D) * pow_l(kd, D - 1.0) / pow_l(2.0, kd - 1.0);
    c.c5 = 1.0 / pow_l(p.c0, 1.5) *
           (t.B5 * pow_l(ld, 2.0 * D + D / 2.0) / static_cast<double>(p.N) +
            t.B6 / (pow_l(2.0, static_cast<double>(M)) *
                    pow_l(ld, (D / 2.0) * (static_cast<double>(M) - 3.0)) * rootN));
    return c;
}

double phi_envelope(double omega, const LemmaConstants& c, const ConstantTable& t) {
    if (!(c.c1 < 0.5)) throw envelope_inapplicable("phi_envelope: requires c1 < 1/2");
    if (omega < 0.0 || omega > t.omega_max() + 1e-12)
        throw window_violation("phi_envelope: omega outside frequency window",
                               {"0 <= omega <= min(Omega1,Omega2,Omega3)"});
    const double w2 = omega * omega;
    const double first = std::exp(-w2 / 6.0) * w2 * (c.c1 / 2.0 + c.c2 * omega / 3.0);
    const double second = 4.0 * (c.c4 + c.c5 * omega) * (1.0 - std::exp(-w2 / 4.0));
    const double third = c.c3 * (omega > 0.0 ? std::min(8.0 / omega, omega) : 0.0);
    return first + second + third;
}

double delta_estimate(const LemmaConstants& c, const ConstantTable& t, double Omega, double C) {
    if (Omega <= 0.0) throw invalid_parameter("delta_estimate: Omega must be positive");
    if (Omega > t.omega_max() + 1e-12)
        throw window_violation("delta_estimate: Omega outside frequency window",
                               {"Omega <= min(Omega1,Omega2,Omega3)"});
    if (!(c.c1 < 0.5)) throw envelope_inapplicable("delta_estimate: requires c1 < 1/2");
    return C / Omega + 6.0 * c.c1 / (2.0 * pi) + std::sqrt(6.0) * c.c2 / std::sqrt(pi) +
           (8.0 / pi) * (c.c3 + c.c4) * (1.0 + std::log(Omega)) + 8.0 * c.c5 * Omega / pi;
}

std::string BoundReport::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"variant\":\"" << variant_name(variant) << "\",\"applicable\":"
       << (applicable ? "true" : "false") << ",\"delta_bound\":" << delta_bound
       << ",\"Omega\":" << Omega << ",\"l\":" << l << ",\"M\":" << M << ",\"K\":" << K
       << ",\"delta_exponent\":" << delta_exponent << ",\"validity\":[";
    for (std::size_t i = 0; i < validity.size(); ++i) {
        if (i) os << ",";
        os << "{\"name\":\"" << validity[i].name
           << "\",\"holds\":" << (validity[i].holds ? "true" : "false") << "}";
    }
    os << "],\"constants\":{\"c1\":" << constants.c1 << ",\"c2\":" << constants.c2
       << ",\"c3\":" << constants.c3 << ",\"c4\":" << constants.c4 << ",\"c5\":" << constants.c5
       << ",\"c3_tilde\":" << constants.c3_tilde << "},\"table\":{\"Gamma\":" << table.Gamma
       << ",\"B1\":" << table.B1 << ",\"B2\":" << table.B2 << ",\"B3\":" << table.B3
       << ",\"B4\":" << table.B4 << ",\"B5\":" << table.B5 << ",\"B6\":" << table.B6
       << ",\"Omega1\":" << table.Omega1 << ",\"Omega2\":" << table.Omega2
       << ",\"Omega3\":" << table.Omega3 << "}";
    if (!note.empty()) os << ",\"note\":\"" << note << "\"";
    os << "}";
    return os.str();
}

namespace {

// shared tail of the recipe: round (l, M, K), recheck windows, fill constants
void finish_report(const ModelParams& p, BoundReport& rep, double l_raw) {
    rep.l = static_cast<long>(std::ceil(l_raw)) + 1;
    rep.M = std::max<long>(1, (rep.l - 1) / 2);
    rep.K = static_cast<long>(std::floor(std::log2(static_cast<double>(p.N))));
    rep.validity.push_back({"l > 1", rep.l > 1});
    rep.validity.push_back({"K > 1", rep.K > 1});
    rep.validity.push_back({"l - M >= 1", rep.l - rep.M >= 1});
    rep.validity.push_back(
        {"2*R*l*K <= N", 2.0 * p.R * static_cast<double>(rep.l) * static_cast<double>(rep.K) <=
                             static_cast<double>(p.N)});
    rep.table = table_constants(p, rep.l, rep.M, rep.K);
    bool windows_ok = true;
    for (const auto& pc : rep.validity) windows_ok = windows_ok && pc.holds;
    if (windows_ok) {
        rep.constants = lemma_c_constants(p, rep.table, rep.l, rep.M, rep.K);
        rep.validity.push_back({"c1 < 1/2", rep.constants.c1 < 0.5});
    } else {
        rep.validity.push_back({"c1 < 1/2", false});
    }
    rep.applicable = true;
    for (const auto& pc : rep.validity) rep.applicable = rep.applicable && pc.holds;
}

BoundReport exp_bound(const ModelParams& p, double C) {
    if (p.decay.model != DecayModel::exponential)
        throw invalid_parameter("theorem_bound: exponential variant needs an exponential fit");
    const double xi = p.decay.xi, L0 = p.decay.L0;
    if (xi <= 0.0) throw invalid_parameter("theorem_bound: decay length must be positive");
    const double N = static_cast<double>(p.N), lgN = std::log(N), D = p.D;

    BoundReport rep;
    rep.variant = TheoremVariant::exponential;
    rep.validity.push_back({"N > e^2", N > std::exp(2.0)});
    rep.validity.push_back({"N > 4*xi*(log N)^2/log 2", N > 4.0 * xi * lgN * lgN / log2_});
    finish_report(p, rep, (xi / p.R) * lgN);

    const double Gamma = rep.table.Gamma, B2 = rep.table.B2, B4 = rep.table.B4,
                 B5 = rep.table.B5, B6 = rep.table.B6;
    const double sc0 = std::sqrt(p.c0);
    const double B7 = std::min(
        {sc0 * pow_l(log2_, (D - 1.0) / 2.0) * pow_l(p.R, D / 2.0) /
             (2.0 * Gamma * pow_l(2.0 * xi, D / 2.0)),
         sc0 * pow_l(log2_, D - 1.0) * pow_l(p.R, D) / (2.0 * B2 * pow_l(2.0 * xi, D)),
         p.c0 * sc0 * pow_l(p.R, 2.0 * D) / (4.0 * B4 * pow_l(2.0 * xi, 2.0 * D))});
    rep.Omega = B7 * std::sqrt(N) / pow_l(lgN, 2.0 * D);

    const double t1 = C / B7;
    const double t2 = 6.0 * p.c_D * L0 * pow_l(xi, D) /
                      (2.0 * pi * p.c0 * pow_l(p.R, D - 1.0) * pow_l(lgN, D + 1.0) *
                       pow_l(N, 1.5));
    const double t3 = std::sqrt(6.0) * B4 * pow_l(2.0 * xi, 2.0 * D) /
                      (std::sqrt(pi) * pow_l(p.c0, 1.5) * pow_l(p.R, 2.0 * D));
    const double t4 =
        (8.0 / pi) *
        (16.0 * xi * L0 / (sc0 * pow_l(lgN, 2.0 * D - 2.0)) +
         2.0 * B2 * pow_l(2.0 * xi, D) /
             (p.c0 * pow_l(p.R, D) * pow_l(log2_, D - 1.0) * std::sqrt(N))) *
        ((1.0 + std::log(B7)) / lgN + (0.5 - 2.0 * D * std::log(lgN) / lgN));
    const double t5 = 8.0 * B7 * B5 * pow_l(2.0 * xi, 2.5 * D) /
                      (pi * pow_l(p.c0, 1.5) * pow_l(p.R, 2.5 * D) * pow_l(lgN, 1.5 * D));
    const double t6 =
        8.0 * B7 * B6 /
        (pi * pow_l(p.c0, 1.5) * pow_l(N, xi * log2_ / (2.0 * p.R) - 0.5) *
         pow_l(lgN, (D / 2.0) * ((xi / (2.0 * p.R)) * lgN + 5.0)));
    rep.delta_bound = (t1 + t2 + t3 + t4 + t5 + t6) * pow_l(lgN, 2.0 * D) / std::sqrt(N);
    rep.delta_exponent = -0.5;
    return rep;
}

BoundReport alg_bound(const ModelParams& p, bool strong, double eps, double C) {
    if (p.decay.model != DecayModel::algebraic)
        throw invalid_parameter("theorem_bound: algebraic variant needs an algebraic fit");
    const double D = p.D, L0 = p.decay.L0;
    const double beta = p.decay.power - D; // alpha(r) = L0 r^{-(D+beta)}
    const double min_beta = strong ? D : D + 1.0;
    if (!(beta > min_beta))
        throw invalid_parameter("theorem_bound: decay power too small for this variant");
    const double denom = strong ? (beta + 3.0 * D) : (beta + 3.0 * D - 1.0);
    const double eps_max =
        strong ? (beta - D) / (2.0 * denom) : (beta - D - 1.0) / (2.0 * denom);
    if (eps < 0.0 || eps >= eps_max)
        throw invalid_parameter("theorem_bound: eps outside (0, eps_max); eps = 0 evaluates the "
                                "boundary rate with its extra log factor");
    const double delta = 1.0 / denom + eps / (2.0 * D);
    const double N = static_cast<double>(p.N), lgN = std::log(N);

    BoundReport rep;
    rep.variant = strong ? TheoremVariant::algebraic_strong : TheoremVariant::algebraic;
    rep.validity.push_back(
        {"N > floor(2^(1/delta))", N > std::floor(pow_l(2.0, 1.0 / delta))});
    rep.validity.push_back(
        {"N > 4*R*N^delta*log N/log 2", N > 4.0 * p.R * pow_l(N, delta) * lgN / log2_});
    finish_report(p, rep, pow_l(N, delta));

    const double Gamma = rep.table.Gamma, B2 = rep.table.B2, B4 = rep.table.B4,
                 B5 = rep.table.B5, B6 = rep.table.B6;
    const double sc0 = std::sqrt(p.c0);
    const double B7t = std::min({sc0 * pow_l(log2_, (D - 1.0) / 2.0) / (2.0 * Gamma),
                                 sc0 * pow_l(log2_, D - 1.0) / (2.0 * B2),
                                 p.c0 * sc0 / (4.0 * B4)});
    const double rate = 0.5 - 2.0 * delta * D;
    rep.Omega = B7t * pow_l(N, rate);

    const double t1 = C / B7t;
    const double t2 = pow_l(N, -((beta + 2.0 * D) * delta - 0.5)) * 6.0 * p.c_D * L0 *
                      pow_l(2.0 * p.R, D - 1.0) /
                      (2.0 * beta * pi * p.c0 * pow_l(2.0 * p.R, beta));
    const double t3 =
        std::sqrt(6.0) * B4 * pow_l(2.0, 2.0 * D) / (std::sqrt(pi) * pow_l(p.c0, 1.5));
    const double bracket = 8.0 * (1.0 + std::log(B7t)) / pi + (8.0 / pi) * rate * lgN;
    const double line_coeff = (strong ? 4.0 : 16.0 * p.R) * L0 / (sc0 * pow_l(p.R, beta + D));
    const double t4 = pow_l(N, -(denom * delta - 1.0)) * bracket * line_coeff;
    const double t5 = pow_l(lgN / log2_, D - 1.0) / pow_l(N, 0.5 + delta * D) * bracket *
                      (2.0 * B2 * pow_l(2.0, D) / p.c0);
    const double t6 =
        pow_l(N, -1.5 * D * delta) * 8.0 * B5 * B7t * pow_l(2.0, 2.5 * D) /
        (pi * pow_l(p.c0, 1.5));
    const double Nd2 = pow_l(N, delta) / 2.0;
    const double t7 = 8.0 * B6 * B7t /
                      (pow_l(p.c0, 1.5) * pow_l(2.0, Nd2) *
                       pow_l(N, 0.5 + delta * D * (4.0 + 0.5 * (Nd2 - 3.0))));
    rep.delta_bound = (t1 + t2 + t3 + t4 + t5 + t6 + t7) * pow_l(N, -rate);
    rep.delta_exponent = -rate;
    if (eps == 0.0) rep.note = "boundary rate: log factor carried inside the bracket";
    return rep;
}

} // namespace

BoundReport theorem_bound(const ModelParams& p, TheoremVariant variant, double eps, double C) {
    require_geometry(p);
    switch (variant) {
    case TheoremVariant::exponential: return exp_bound(p, C);
    case TheoremVariant::algebraic: return alg_bound(p, false, eps, C);
    case TheoremVariant::algebraic_strong: return alg_bound(p, true, eps, C);
    }
    throw invalid_parameter("theorem_bound: unknown variant");
}

BoundReport product_bound(const ModelParams& p, double C) {
    require_geometry(p);
    const double N = static_cast<double>(p.N), rootN = std::sqrt(N);
    BoundReport rep;
    rep.variant = TheoremVariant::exponential;
    rep.note = "product-state bound";
    const double ws = omega_star(p.R, p.D, p.E);
    const double B1t = pow_l(std::sqrt(p.c0) * ws * p.E, -3.0);
    const double Cp = std::min(ws * p.sigma_H / (2.0 * rootN), 1.0 / (4.0 * B1t));
    const bool variance_ok = p.sigma_H * p.sigma_H >= p.c0 * p.E * p.E * N;
    rep.validity.push_back({"sigma_H^2 >= c0*E^2*N", variance_ok});
    rep.applicable = variance_ok;
    rep.Omega = Cp * rootN;
    rep.delta_bound = (C + 4.0 * B1t) / (Cp * rootN);
    rep.delta_exponent = -0.5;
    return rep;
}

} // namespace qclt
