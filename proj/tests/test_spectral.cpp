#include "doctest.h"

#include "qclt/errors.hpp"
#include "qclt/models.hpp"
#include "qclt/operators.hpp"
#include "qclt/spectral.hpp"
#include "qclt/states.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace qclt;

namespace {

Matrix standardized_dense(const Matrix& H, const SpectralMeasure& m) {
    Matrix Hs = H;
    for (std::size_t i = 0; i < H.rows(); ++i) Hs(i, i) -= m.mu;
    Hs *= cplx(1.0 / m.sigma, 0.0);
    return Hs;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return g;
}

// brute-force sup |F - G| on a fine grid plus atom neighborhoods
double kolmogorov_scan(const SpectralMeasure& m) {
    std::vector<double> ys;
    for (double y = -10.0; y <= 10.0; y += 2e-3) ys.push_back(y);
    for (double e : m.energies) {
        ys.push_back(e - 1e-12);
        ys.push_back(e);
        ys.push_back(e + 1e-12);
    }
    double best = 0.0;
    for (double y : ys) {
        double F = 0.0;
        for (std::size_t k = 0; k < m.size(); ++k)
            if (m.energies[k] <= y) F += m.weights[k];
        best = std::max(best, std::abs(F - gaussian_cdf(y)));
    }
    return best;
}

} // namespace

TEST_CASE("measures of small models") {
    Matrix Z = pauli('Z');
    auto m = spectral_measure(Z, maximally_mixed(1));
    REQUIRE(m.size() == 2);
    CHECK(m.energies[0] == doctest::Approx(-1.0));
    CHECK(m.weights[0] == doctest::Approx(0.5));
    CHECK(m.mu == doctest::Approx(0.0));
    CHECK(m.sigma == doctest::Approx(1.0));

    std::vector<Matrix> up = {Matrix(2, 2)};
    up[0](0, 0) = 1.0;
    auto pure = spectral_measure(Z, product_state(up));
    REQUIRE(pure.size() == 1);
    CHECK(pure.energies[0] == doctest::Approx(1.0));
    CHECK(pure.sigma == doctest::Approx(0.0));

    Matrix bad(2, 2);
    bad(0, 1) = 1.0; // not Hermitian
    CHECK_THROWS_AS(spectral_measure(bad, maximally_mixed(1)), invalid_parameter);
}

TEST_CASE("bond-sum model gives the binomial law") {
    const std::size_t N = 6;
    auto lat = build_lattice(LatticeKind::chain, {N}, false);
    auto H = dense_hamiltonian(zz_chain(lat));
    auto m = spectral_measure(H, maximally_mixed(N));
    // N-1 = 5 independent +-1 bonds
    REQUIRE(m.size() == 6);
    for (int k = 0; k <= 5; ++k) {
        CHECK(m.energies[static_cast<std::size_t>(k)] == doctest::Approx(2.0 * k - 5.0));
        const double binom = std::tgamma(6.0) / (std::tgamma(k + 1.0) * std::tgamma(6.0 - k)) /
                             32.0;
        CHECK(m.weights[static_cast<std::size_t>(k)] == doctest::Approx(binom).epsilon(1e-10));
    }
    CHECK(m.sigma == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
}

TEST_CASE("fast path agrees with the dense path") {
    for (std::size_t N : {4, 6, 8, 10}) {
        auto lat = build_lattice(LatticeKind::chain, {N}, false);
        auto model = zz_chain(lat);
        auto fast = fast_commuting_measure(model, maximally_mixed(N));
        auto slow = spectral_measure(dense_hamiltonian(model), maximally_mixed(N));
        REQUIRE(fast.size() == slow.size());
        for (std::size_t k = 0; k < fast.size(); ++k) {
            CHECK(fast.energies[k] == doctest::Approx(slow.energies[k]).epsilon(1e-12));
            CHECK(fast.weights[k] == doctest::Approx(slow.weights[k]).epsilon(1e-12));
        }
    }
    auto lat = build_lattice(LatticeKind::chain, {4}, false);
    CHECK_THROWS_AS(fast_commuting_measure(transverse_field_chain(lat), maximally_mixed(4)),
                    invalid_parameter);
}

TEST_CASE("standardization") {
    SpectralMeasure two;
    two.energies = {-1.0, 1.0};
    two.weights = {0.5, 0.5};
    two.mu = 0.0;
    two.sigma = 1.0;
    auto st = standardize(two, 0.5, 1.0, 1);
    CHECK(st.variance_ok);
    CHECK(st.measure.energies[0] == doctest::Approx(-1.0));
    CHECK(st.measure.mu == doctest::Approx(0.0));
    CHECK(st.measure.sigma == doctest::Approx(1.0));

    SpectralMeasure flat;
    flat.energies = {3.0};
    flat.weights = {1.0};
    flat.mu = 3.0;
    flat.sigma = 0.0;
    CHECK_THROWS_AS(standardize(flat, 0.5, 1.0, 1), degenerate_spectrum);

    // ZZ chain: sigma^2 = N-1, variance_ok for c0 = 1/2
    auto lat = build_lattice(LatticeKind::chain, {8}, false);
    auto m = fast_commuting_measure(zz_chain(lat), maximally_mixed(8));
    CHECK(m.sigma * m.sigma == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(standardize(m, 0.5, 1.0, 8).variance_ok);
}

TEST_CASE("gaussian cdf") {
    CHECK(gaussian_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(gaussian_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-12));
    CHECK(gaussian_cdf(-40.0) == doctest::Approx(0.0));
    CHECK(gaussian_cdf(40.0) == doctest::Approx(1.0));
}

TEST_CASE("kolmogorov distance") {
    SpectralMeasure two;
    two.energies = {-1.0, 1.0};
    two.weights = {0.5, 0.5};
    two.mu = 0.0;
    two.sigma = 1.0;
    CHECK(kolmogorov_distance(two) ==
          doctest::Approx(gaussian_cdf(1.0) - 0.5).epsilon(1e-12));

    SpectralMeasure atom;
    atom.energies = {0.0};
    atom.weights = {1.0};
    atom.mu = 0.0;
    atom.sigma = 1.0; // treated as standardized input
    CHECK(kolmogorov_distance(atom) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("kolmogorov distance matches a dense scan on random measures") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 10; ++t) {
        const std::size_t n = 2 + rng() % 6;
        SpectralMeasure m;
        double wsum = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            m.energies.push_back(-3.0 + 6.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53);
            m.weights.push_back(0.05 + static_cast<double>(rng() >> 11) * 0x1.0p-53);
        }
        std::sort(m.energies.begin(), m.energies.end());
        for (double w : m.weights) wsum += w;
        for (auto& w : m.weights) w /= wsum;
        double mu = 0.0, var = 0.0;
        for (std::size_t k = 0; k < n; ++k) mu += m.weights[k] * m.energies[k];
        for (std::size_t k = 0; k < n; ++k)
            var += m.weights[k] * (m.energies[k] - mu) * (m.energies[k] - mu);
        m.mu = mu;
        m.sigma = std::sqrt(var);
        auto st = standardize(m, 0.5, 1.0, 1);
        CHECK(kolmogorov_distance(st.measure) ==
              doctest::Approx(kolmogorov_scan(st.measure)).epsilon(1e-6));
    }
}

TEST_CASE("characteristic function") {
    SpectralMeasure two;
    two.energies = {-1.0, 1.0};
    two.weights = {0.5, 0.5};
    two.mu = 0.0;
    two.sigma = 1.0;
    auto grid = linspace(0.0, 3.0, 50);
    auto curve = characteristic_function(two, grid);
    CHECK(curve.values[0] == cplx(1.0, 0.0));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(curve.values[i].real() == doctest::Approx(std::cos(grid[i])).epsilon(1e-13));
        CHECK(std::abs(curve.values[i].imag()) <= 1e-13);
    }

    // conjugate symmetry, exact
    for (double w : {0.3, 1.1, 2.7}) {
        const cplx a = two.phi(w), b = two.phi(-w);
        CHECK(a.real() == b.real());
        CHECK(a.imag() == -b.imag());
    }
}

TEST_CASE("dual-path characteristic function on random models") {
    auto lat = build_lattice(LatticeKind::chain, {3}, false);
    auto grid = linspace(0.0, 2.0, 15);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto model = random_three_qubit(seed, lat);
        auto H = dense_hamiltonian(model);
        auto state = maximally_mixed(3);
        auto m = spectral_measure(H, state);
        auto st = standardize(m, 0.5, model.E, 3);
        auto eig_curve = characteristic_function(st.measure, grid);
        auto evo_curve =
            characteristic_function_evolution(state, standardized_dense(H, m), grid);
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK(std::abs(eig_curve.values[i] - evo_curve.values[i]) <= 1e-8);
    }
}

TEST_CASE("cumulant remainder window") {
    CHECK(omega_star(1.0, 1.0, 1.0) ==
          doctest::Approx(1.0 / (4.0 * std::exp(2.0))).epsilon(1e-13));
    // locality radius below one is evaluated at one
    CHECK(omega_star(0.0, 1.0, 1.0) == doctest::Approx(omega_star(1.0, 1.0, 1.0)));

    const std::size_t N = 64;
    auto lat = build_lattice(LatticeKind::chain, {N}, false);
    auto model = field_model(lat);
    auto m = fast_commuting_measure(model, maximally_mixed(N));
    auto st = standardize(m, 0.5, 1.0, N);
    const double ws = omega_star(1.0, 1.0, 1.0);
    auto grid = linspace(0.0, ws * m.sigma, 12); // half inside the window, half outside
    auto pts = cumulant_window_check(st.measure, m.sigma, N, 1.0, 1.0, 1.0, grid);
    REQUIRE(pts.size() == grid.size());
    bool saw_in = false, saw_out = false;
    for (const auto& p : pts) {
        if (p.in_window) {
            saw_in = true;
            CHECK_FALSE(p.violation);
            CHECK(p.lhs <= p.rhs + 1e-15);
        } else {
            saw_out = true;
        }
    }
    CHECK(saw_in);
    CHECK(saw_out);

    // symmetric law: remainder is quartic near 0, well under the cubic bound
    const double w = grid[1];
    const double lhs = std::abs(std::log(std::abs(st.measure.phi(w))) + w * w / 2.0);
    CHECK(lhs <= std::pow(w, 3.9));
}
