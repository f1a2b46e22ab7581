#include "doctest.h"

#include "qclt/bounds.hpp"
#include "qclt/errors.hpp"
#include "qclt/spectral.hpp"
#include "oracle_constants.hpp"

#include <cmath>
#include <vector>

using namespace qclt;

namespace {

DecayFit exp_fit(double L0, double xi) {
    DecayFit f;
    f.model = DecayModel::exponential;
    f.L0 = L0;
    f.xi = xi;
    return f;
}

DecayFit alg_fit(double L0, double power) {
    DecayFit f;
    f.model = DecayModel::algebraic;
    f.L0 = L0;
    f.power = power;
    return f;
}

ModelParams params(std::size_t N, int D, double c_D, double R, double E, double c0,
                   double sigma_H, DecayFit decay, bool commuting) {
    ModelParams p;
    p.N = N;
    p.D = D;
    p.c_D = c_D;
    p.R = R;
    p.E = E;
    p.c0 = c0;
    p.sigma_H = sigma_H;
    p.decay = decay;
    p.commuting = commuting;
    return p;
}

// ten spread-out parameter points reused by every regression below
std::vector<ModelParams> regression_points() {
    std::vector<ModelParams> pts;
    pts.push_back(params(64, 1, 2.0, 1.0, 1.0, 0.5, 8.0, exp_fit(1.0, 1.0), false));
    pts.push_back(params(256, 1, 2.0, 1.0, 1.0, 0.5, 16.0, exp_fit(0.5, 2.0), true));
    pts.push_back(params(1024, 2, 4.0, 1.0, 2.0, 0.25, 64.0, exp_fit(2.0, 0.7), false));
    pts.push_back(params(4096, 2, 4.0, 2.0, 1.0, 0.5, 64.0, exp_fit(1.0, 1.5), false));
    pts.push_back(params(100, 1, 2.0, 2.0, 0.5, 1.0, 5.0, exp_fit(3.0, 0.5), false));
    pts.push_back(params(10000, 3, 6.0, 1.0, 1.0, 0.5, 100.0, exp_fit(1.0, 1.0), false));
    pts.push_back(params(512, 1, 2.0, 1.0, 1.0, 0.3, 12.0, alg_fit(1.0, 4.0), false));
    pts.push_back(params(2048, 1, 2.0, 1.0, 3.0, 0.5, 135.0, alg_fit(0.2, 5.0), true));
    pts.push_back(params(65536, 2, 4.0, 1.0, 1.0, 0.5, 181.0, alg_fit(1.0, 8.0), false));
    pts.push_back(params(1000000, 1, 2.0, 1.0, 1.0, 0.5, 707.0, exp_fit(1.0, 1.0), false));
    return pts;
}

double oracle_Calpha(const DecayFit& f, int D, double c_D, double l) {
    if (f.model == DecayModel::exponential) return oracle::c_alpha_exp(f.L0, f.xi, D, c_D, l);
    if (f.model == DecayModel::algebraic) return oracle::c_alpha_alg(f.L0, f.power, D, c_D, l);
    return 0.0;
}

oracle::Geometry geom(const ModelParams& p) {
    return {static_cast<double>(p.D), p.c_D, p.R, p.E, p.c0, p.sigma_H,
            static_cast<double>(p.N), p.commuting};
}

} // namespace

TEST_CASE("auxiliary series sums") {
    CHECK(s_series(0.0) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(s_series(1.0) == doctest::Approx(6.0).epsilon(1e-13));
    CHECK(s_series(2.0) == doctest::Approx(22.0).epsilon(1e-13));
    for (double x : {0.5, 1.5, 3.0, 4.0, 6.0})
        CHECK(s_series(x) == doctest::Approx(oracle::s_series(x)).epsilon(1e-12));
}

TEST_CASE("correlation tail sum") {
    // geometric closed form
    CHECK(c_alpha(exp_fit(1.0, 1.0), 1, 2.0, 1.0) ==
          doctest::Approx(2.0 * std::exp(-1.0) / (1.0 - std::exp(-1.0))).epsilon(1e-12));
    DecayFit none;
    CHECK(c_alpha(none, 1, 2.0, 3.0) == 0.0);
    // power-law tail against the partial-sum oracle and its analytic cap
    for (double l : {1.0, 2.0, 5.0}) {
        const double v = c_alpha(alg_fit(1.0, 4.0), 1, 2.0, l);
        const double o = oracle::c_alpha_alg(1.0, 4.0, 1.0, 2.0, l);
        CHECK(v == doctest::Approx(o).epsilon(1e-6));
        // the closed-form cap 2 c_D L0 l^{-beta} / beta only holds from
        // distance 2 on (the first summand alone already exceeds it at l = 1)
        const double beta = 4.0 - 1.0;
        if (l >= 2.0)
            CHECK(v <= 2.0 * 2.0 * 1.0 * std::pow(l, -beta) / beta * (1.0 + 1e-9));
    }
    CHECK_THROWS_AS(c_alpha(alg_fit(1.0, 0.5), 1, 2.0, 1.0), invalid_parameter);
    // D=2 exponential: library closed/tail-bounded form vs direct summation
    const double v2 = c_alpha(exp_fit(1.0, 1.5), 2, 4.0, 2.0);
    CHECK(v2 == doctest::Approx(oracle::c_alpha_exp(1.0, 1.5, 2.0, 4.0, 2.0)).epsilon(1e-9));
}

TEST_CASE("constant table against a second transcription") {
    for (const auto& p : regression_points()) {
        const long l = 3, M = 1, K = 4;
        const auto t = table_constants(p, l, M, K);
        const auto g = geom(p);
        const auto ot = oracle::table(g, static_cast<double>(l), static_cast<double>(K));
        CHECK(t.Gamma == doctest::Approx(ot.Gamma).epsilon(1e-12));
        CHECK(t.B1 == doctest::Approx(ot.B1).epsilon(1e-12));
        CHECK(t.B2 == doctest::Approx(ot.B2).epsilon(1e-12));
        CHECK(t.B3 == doctest::Approx(ot.B3).epsilon(1e-12));
        CHECK(t.B4 == doctest::Approx(ot.B4).epsilon(1e-12));
        const double Calpha1 = oracle_Calpha(p.decay, p.D, p.c_D, 1.0);
        CHECK(t.B5 == doctest::Approx(oracle::B5(g, ot.B2, Calpha1)).epsilon(1e-9));
        if (p.commuting)
            CHECK(t.B6 == 0.0);
        else
            CHECK(t.B6 == doctest::Approx(ot.B6).epsilon(1e-12));
        CHECK(t.Omega1 == doctest::Approx(ot.Omega1).epsilon(1e-12));
        CHECK(t.Omega2 == doctest::Approx(ot.Omega2).epsilon(1e-12));
        CHECK(t.Omega3 == doctest::Approx(ot.Omega3).epsilon(1e-12));
        CHECK(t.omega_max() ==
              doctest::Approx(std::min({ot.Omega1, ot.Omega2, ot.Omega3})).epsilon(1e-12));
    }
    // spot value: D=1, R=1, c_D=2 gives Gamma = 16
    auto p = params(64, 1, 2.0, 1.0, 1.0, 0.5, 8.0, exp_fit(1.0, 1.0), false);
    CHECK(table_constants(p, 2, 1, 2).Gamma == doctest::Approx(16.0));
}

TEST_CASE("envelope coefficients against a second transcription") {
    for (const auto& p : regression_points()) {
        const long l = 3, M = 1, K = 4;
        const auto t = table_constants(p, l, M, K);
        const auto c = lemma_c_constants(p, t, l, M, K);
        const auto g = geom(p);
        const double Ca = oracle_Calpha(p.decay, p.D, p.c_D, 2.0 * p.R * (l - 1.0));
        const double al = p.decay.alpha(2.0 * p.R * (l - M - 1.0));
        oracle::Table ot = oracle::table(g, static_cast<double>(l), static_cast<double>(K));
        ot.B5 = oracle::B5(g, ot.B2, oracle_Calpha(p.decay, p.D, p.c_D, 1.0));
        const auto oc = oracle::cvals(g, ot, static_cast<double>(l), static_cast<double>(M),
                                      static_cast<double>(K), Ca, al);
        CHECK(c.c1 == doctest::Approx(oc.c1).epsilon(1e-9));
        CHECK(c.c2 == doctest::Approx(oc.c2).epsilon(1e-12));
        CHECK(c.c3 == doctest::Approx(oc.c3).epsilon(1e-12));
        CHECK(c.c4 == doctest::Approx(oc.c4).epsilon(1e-12));
        CHECK(c.c5 == doctest::Approx(oc.c5).epsilon(1e-9));
        CHECK(c.c3_tilde == doctest::Approx(oc.c3_tilde).epsilon(1e-12));
    }
}

TEST_CASE("envelope coefficient spot values") {
    // alpha(r) = e^{-r}, l=3, R=1, D=1, c_D=2, c0=0.5 -> c1 = 4*Calpha(4)
    auto p = params(64, 1, 2.0, 1.0, 1.0, 0.5, 8.0, exp_fit(1.0, 1.0), false);
    auto t = table_constants(p, 3, 1, 4);
    auto c = lemma_c_constants(p, t, 3, 1, 4);
    CHECK(c.c1 == doctest::Approx(0.23179).epsilon(1e-4));

    // no correlations: c1 = c3 = 0
    DecayFit none;
    auto p0 = params(64, 1, 2.0, 1.0, 1.0, 0.5, 8.0, none, false);
    auto t0 = table_constants(p0, 3, 1, 4);
    auto c0v = lemma_c_constants(p0, t0, 3, 1, 4);
    CHECK(c0v.c1 == 0.0);
    CHECK(c0v.c3 == 0.0);

    // c4 carries 2^{-(K-1)}
    auto big = params(100000, 1, 2.0, 1.0, 1.0, 0.5, 300.0, none, false);
    auto tA = table_constants(big, 3, 1, 8);
    auto tB = table_constants(big, 3, 1, 16);
    auto cA = lemma_c_constants(big, tA, 3, 1, 8);
    auto cB = lemma_c_constants(big, tB, 3, 1, 16);
    CHECK(cB.c4 / cA.c4 == doctest::Approx(std::pow(2.0, -8.0)).epsilon(1e-10));
}

TEST_CASE("small-frequency envelope") {
    // large standard deviation so the admissible frequency window covers the
    // pinned evaluation points
    auto p = params(64, 1, 2.0, 1.0, 1.0, 0.5, 1e8, exp_fit(1.0, 1.0), false);
    auto t = table_constants(p, 3, 1, 4);
    auto c = lemma_c_constants(p, t, 3, 1, 4);
    REQUIRE(c.c1 < 0.5);
    CHECK(phi_envelope(0.0, c, t) == 0.0);
    for (double w : {0.05, 0.1, 0.2, 0.5, 1.0})
        CHECK(phi_envelope(w, c, t) == doctest::Approx(oracle::envelope(w, {c.c1, c.c2, c.c3, c.c4, c.c5, c.c3_tilde})).epsilon(1e-12));

    LemmaConstants zero;
    CHECK(phi_envelope(0.7, zero, t) == 0.0);

    LemmaConstants bad;
    bad.c1 = 0.6;
    CHECK_THROWS_AS(phi_envelope(0.1, bad, t), envelope_inapplicable);
}

TEST_CASE("distance estimate from the envelope") {
    // large standard deviation so cutoffs 2 and 10 sit inside the window
    auto p = params(1000000, 1, 2.0, 1.0, 1.0, 0.5, 1e8, exp_fit(1.0, 1.0), false);
    auto t = table_constants(p, 3, 1, 10);
    LemmaConstants zero;
    CHECK(delta_estimate(zero, t, 2.0, 3.05) == doctest::Approx(3.05 / 2.0).epsilon(1e-13));
    CHECK(delta_estimate(zero, t, 2.0, 6.10) == doctest::Approx(2.0 * 3.05 / 2.0).epsilon(1e-13));

    LemmaConstants c;
    c.c1 = 0.1;
    c.c2 = 0.01;
    c.c3 = 0.001;
    c.c4 = 0.001;
    c.c5 = 0.0001;
    const double ref = oracle::delta_estimate({0.1, 0.01, 0.001, 0.001, 0.0001, 0.0}, 10.0, 3.05);
    CHECK(delta_estimate(c, t, 10.0, 3.05) == doctest::Approx(ref).epsilon(1e-12));
    CHECK_THROWS_AS(delta_estimate(c, t, 1e9, 3.05), window_violation);
}

TEST_CASE("exponential-decay rate function regression") {
    int applicable = 0;
    for (const auto& p0 : regression_points()) {
        if (p0.decay.model != DecayModel::exponential) continue;
        auto rep = theorem_bound(p0, TheoremVariant::exponential, 0.0, 3.05);
        const auto g = geom(p0);
        oracle::Table ot =
            oracle::table(g, static_cast<double>(rep.l), static_cast<double>(rep.K));
        ot.B5 = oracle::B5(g, ot.B2, oracle_Calpha(p0.decay, p0.D, p0.c_D, 1.0));
        const auto ob =
            oracle::exp_bound(g, p0.decay.L0, p0.decay.xi, 3.05, rep.l, rep.M, rep.K, ot.B2,
                              ot.B4, ot.B5, ot.B6, ot.Gamma);
        CHECK(rep.Omega == doctest::Approx(ob.Omega).epsilon(1e-9));
        CHECK(rep.delta_bound == doctest::Approx(ob.bound).epsilon(1e-9));
        CHECK(rep.delta_exponent == doctest::Approx(-0.5));
        if (rep.applicable) ++applicable;
    }
    CHECK(applicable >= 1);
}

TEST_CASE("exponential-decay rate pinned at N = 10^6") {
    auto p = params(1000000, 1, 2.0, 1.0, 1.0, 0.5, 707.0, exp_fit(1.0, 1.0), false);
    auto rep = theorem_bound(p, TheoremVariant::exponential, 0.0, 3.05);
    const auto g = geom(p);
    oracle::Table ot = oracle::table(g, static_cast<double>(rep.l), static_cast<double>(rep.K));
    ot.B5 = oracle::B5(g, ot.B2, oracle_Calpha(p.decay, p.D, p.c_D, 1.0));
    const auto ob = oracle::exp_bound(g, 1.0, 1.0, 3.05, rep.l, rep.M, rep.K, ot.B2, ot.B4,
                                      ot.B5, ot.B6, ot.Gamma);
    CHECK(rep.delta_bound == doctest::Approx(ob.bound).epsilon(1e-12));
}

TEST_CASE("rate function preconditions") {
    auto p = params(10, 1, 2.0, 1.0, 1.0, 0.5, 2.2, exp_fit(1.0, 1.0), false);
    auto rep = theorem_bound(p, TheoremVariant::exponential, 0.0, 3.05);
    CHECK_FALSE(rep.applicable);
    bool found = false;
    for (const auto& v : rep.validity)
        if (!v.holds) found = true;
    CHECK(found);
}

TEST_CASE("rate bound monotone in N where applicable") {
    DecayFit f = exp_fit(1.0, 1.0);
    double prev = 0.0;
    bool first = true;
    for (int k = 0; k < 20; ++k) {
        const double Nf = std::pow(10.0, 4.0 + 4.0 * k / 19.0);
        const auto N = static_cast<std::size_t>(Nf);
        auto p = params(N, 1, 2.0, 1.0, 1.0, 0.5, std::sqrt(0.5 * Nf), f, false);
        auto rep = theorem_bound(p, TheoremVariant::exponential, 0.0, 3.05);
        if (!rep.applicable) continue;
        if (!first) CHECK(rep.delta_bound <= prev * (1.0 + 1e-12));
        prev = rep.delta_bound;
        first = false;
    }
    CHECK_FALSE(first);
}

TEST_CASE("algebraic-decay rate function regression") {
    for (const auto& p0 : regression_points()) {
        if (p0.decay.model != DecayModel::algebraic) continue;
        const double beta = p0.decay.power - p0.D;
        for (bool strong : {false, true}) {
            if (!(beta > (strong ? p0.D : p0.D + 1.0))) continue;
            const double denom = strong ? beta + 3.0 * p0.D : beta + 3.0 * p0.D - 1.0;
            const double eps_max =
                (strong ? beta - p0.D : beta - p0.D - 1.0) / (2.0 * denom);
            for (double eps : {0.0, 0.5 * eps_max}) {
                auto rep = theorem_bound(p0,
                                         strong ? TheoremVariant::algebraic_strong
                                                : TheoremVariant::algebraic,
                                         eps, 3.05);
                const auto g = geom(p0);
                oracle::Table ot =
                    oracle::table(g, static_cast<double>(rep.l), static_cast<double>(rep.K));
                const auto ob = oracle::alg_bound(g, p0.decay.L0, beta, eps, 3.05, ot.B2,
                                                  ot.B4,
                                                  oracle::B5(g, ot.B2,
                                                             oracle_Calpha(p0.decay, p0.D,
                                                                           p0.c_D, 1.0)),
                                                  ot.B6, ot.Gamma, strong);
                CHECK(rep.Omega == doctest::Approx(ob.Omega).epsilon(1e-9));
                CHECK(rep.delta_bound == doctest::Approx(ob.bound).epsilon(1e-9));
                CHECK(rep.delta_exponent == doctest::Approx(-ob.delta_exp).epsilon(1e-12));
                if (eps == 0.0) CHECK(rep.note.find("boundary") != std::string::npos);
            }
            CHECK_THROWS_AS(theorem_bound(p0,
                                          strong ? TheoremVariant::algebraic_strong
                                                 : TheoremVariant::algebraic,
                                          eps_max, 3.05),
                            invalid_parameter);
            CHECK_THROWS_AS(theorem_bound(p0,
                                          strong ? TheoremVariant::algebraic_strong
                                                 : TheoremVariant::algebraic,
                                          -0.01, 3.05),
                            invalid_parameter);
        }
    }
}

TEST_CASE("algebraic variants reject too-slow decay") {
    auto p = params(4096, 1, 2.0, 1.0, 1.0, 0.5, 64.0, alg_fit(1.0, 2.5), false);
    // power 2.5 -> beta = 1.5 <= D+1: plain variant rejects, strong accepts
    CHECK_THROWS_AS(theorem_bound(p, TheoremVariant::algebraic, 0.0, 3.05), invalid_parameter);
    auto rep = theorem_bound(p, TheoremVariant::algebraic_strong, 0.0, 3.05);
    CHECK(rep.delta_bound > 0.0);
}

TEST_CASE("product-state bound") {
    const double ws = omega_star(1.0, 1.0, 1.0);
    CHECK(ws == doctest::Approx(1.0 / (4.0 * std::exp(2.0))).epsilon(1e-13));

    DecayFit none;
    auto p = params(100, 1, 2.0, 1.0, 1.0, 1.0, 10.0, none, false);
    auto rep = product_bound(p, 3.05);
    CHECK(rep.applicable);
    const double B1t = std::pow(ws, -3.0); // c0 = E = 1
    const double Cp = std::min(ws * 10.0 / 20.0, 1.0 / (4.0 * B1t));
    CHECK(rep.delta_bound == doctest::Approx((3.05 + 4.0 * B1t) / (Cp * 10.0)).epsilon(1e-12));

    // once C' saturates at 1/(4 B1t), bound * sqrt(N) is an N-independent constant
    double ref = 0.0;
    for (std::size_t N : {100, 400, 1600, 6400}) {
        auto pn = params(N, 1, 2.0, 1.0, 1.0, 1.0, std::sqrt(static_cast<double>(N)), none,
                         false);
        auto rn = product_bound(pn, 3.05);
        const double scaled = rn.delta_bound * std::sqrt(static_cast<double>(N));
        if (ref == 0.0)
            ref = scaled;
        else
            CHECK(scaled == doctest::Approx(ref).epsilon(1e-12));
    }

    // variance assumption failure -> reported, not thrown
    auto bad = params(100, 1, 2.0, 1.0, 1.0, 1.0, 1.0, none, false);
    auto rb = product_bound(bad, 3.05);
    CHECK_FALSE(rb.applicable);
}
