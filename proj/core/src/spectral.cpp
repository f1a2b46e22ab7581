#include "qclt/spectral.hpp"

#include "qclt/eig.hpp"
#include "qclt/errors.hpp"
#include "qclt/expm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qclt {

namespace {

SpectralMeasure from_atoms(std::vector<std::pair<double, double>> atoms, double merge_gap) {
    std::sort(atoms.begin(), atoms.end());

    SpectralMeasure m;
    std::size_t i = 0;
    while (i < atoms.size()) {
        std::size_t j = i;
        double wsum = 0.0, ewsum = 0.0;
        while (j < atoms.size() && atoms[j].first - atoms[i].first <= merge_gap) {
            wsum += atoms[j].second;
            ewsum += atoms[j].first * atoms[j].second;
            ++j;
        }
        if (wsum < -1e-12) throw invalid_state("spectral measure: negative weight");
        if (wsum > 0.0) {
            m.energies.push_back(ewsum / wsum);
            m.weights.push_back(wsum);
        } else if (wsum > -1e-12 && wsum != 0.0) {
            // tiny negative accumulation: clip
        }
        i = j;
    }

    double tot = 0.0;
    for (double w : m.weights) tot += w;
    if (std::abs(tot - 1.0) > 1e-10) throw invalid_state("spectral measure: weights do not sum to 1");

    double mu = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) mu += m.weights[k] * m.energies[k];
    double var = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k)
        var += m.weights[k] * (m.energies[k] - mu) * (m.energies[k] - mu);
    m.mu = mu;
    m.sigma = std::sqrt(std::max(0.0, var));
    return m;
}

} // namespace

cplx SpectralMeasure::phi(double omega) const {
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < energies.size(); ++k) {
        re += weights[k] * std::cos(omega * energies[k]);
        im += weights[k] * std::sin(omega * energies[k]);
    }
    return {re, im};
}

SpectralMeasure spectral_measure(const Matrix& H, const QuantumState& state) {
    const double scale = std::max(1e-300, H.max_abs());
    if (!H.is_hermitian(1e-12 * scale))
        throw invalid_parameter("spectral_measure: H is not Hermitian");
    check_dim(H.rows());

    const std::size_t dim = H.rows();

    // already diagonal: the computational basis is the eigenbasis
    double off = 0.0;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            if (i != j) off = std::max(off, std::abs(H(i, j)));
    if (off <= 1e-14 * scale) {
        auto rho_diag = [&](std::size_t n) -> double {
            if (state.rep == QuantumState::Rep::product) {
                double w = 1.0;
                for (std::size_t s = 0; s < state.N; ++s) {
                    const std::size_t bit = (n >> (state.N - 1 - s)) & 1u;
                    w *= state.factors[s](bit, bit).real();
                }
                return w;
            }
            return state.rho(n, n).real();
        };
        std::vector<std::pair<double, double>> atoms(dim);
        double hnorm = 0.0;
        for (std::size_t n = 0; n < dim; ++n) {
            atoms[n] = {H(n, n).real(), std::max(0.0, rho_diag(n))};
            hnorm = std::max(hnorm, std::abs(H(n, n).real()));
        }
        return from_atoms(std::move(atoms), 1e-10 * hnorm);
    }

    const bool mixed = state.is_maximally_mixed();
    auto eg = eig_hermitian(H, !mixed);

    std::vector<std::pair<double, double>> atoms(dim);
    if (mixed) {
        for (std::size_t n = 0; n < dim; ++n) atoms[n] = {eg.values[n], 1.0 / dim};
    } else {
        const Matrix M = state.dense() * eg.vectors; // column n = rho |n>
        for (std::size_t n = 0; n < dim; ++n) {
            cplx acc = 0.0;
            for (std::size_t a = 0; a < dim; ++a)
                acc += std::conj(eg.vectors(a, n)) * M(a, n);
            atoms[n] = {eg.values[n], std::max(0.0, acc.real())};
        }
    }

    double hnorm = 0.0;
    for (double v : eg.values) hnorm = std::max(hnorm, std::abs(v));
    return from_atoms(std::move(atoms), 1e-10 * hnorm);
}

namespace {

double approx_gcd(double a, double b, double tol) {
    a = std::abs(a);
    b = std::abs(b);
    if (a < b) std::swap(a, b);
    while (b > tol) {
        const double r = std::abs(std::remainder(a, b));
        a = b;
        b = r;
    }
    return a;
}

} // namespace

SpectralMeasure fast_commuting_measure(const HamiltonianModel& model, const QuantumState& state) {
    if (state.rep != QuantumState::Rep::product)
        throw invalid_parameter("fast_commuting_measure: product state required");
    if (state.N != model.N) throw invalid_parameter("fast_commuting_measure: size mismatch");
    const std::size_t N = model.N;

    // per-term diagonal energies; all terms must be computational-basis diagonal
    struct DiagTerm {
        std::size_t lo = 0, hi = 0; // support range
        std::vector<std::size_t> support;
        std::vector<double> energy; // indexed by support configuration
        double emin = 0.0;
    };
    std::vector<DiagTerm> dts;
    dts.reserve(model.terms.size());
    double scale = 1.0;
    for (const auto& t : model.terms) {
        const auto& b = t.op.block;
        const double bnorm = std::max(1e-300, b.max_abs());
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j)
                if (i != j && std::abs(b(i, j)) > 1e-12 * bnorm)
                    throw invalid_parameter(
                        "fast_commuting_measure: non-commuting (non-diagonal) terms detected");
        DiagTerm dt;
        dt.support = t.op.support;
        dt.lo = t.op.support.front();
        dt.hi = t.op.support.back();
        dt.energy.resize(b.rows());
        dt.emin = b(0, 0).real();
        for (std::size_t i = 0; i < b.rows(); ++i) {
            if (std::abs(b(i, i).imag()) > 1e-12 * bnorm)
                throw invalid_parameter("fast_commuting_measure: non-Hermitian diagonal");
            dt.energy[i] = b(i, i).real();
            dt.emin = std::min(dt.emin, dt.energy[i]);
            scale = std::max(scale, std::abs(dt.energy[i]));
        }
        dts.push_back(std::move(dt));
    }

    // common energy grid from the nonnegative per-term increments
    const double tol = 1e-9 * scale;
    double g = 0.0;
    double span = 0.0;
    double base = 0.0;
    for (auto& dt : dts) {
        base += dt.emin;
        double dmax = 0.0;
        for (double e : dt.energy) {
            const double d = e - dt.emin;
            dmax = std::max(dmax, d);
            if (d > tol) g = (g == 0.0) ? d : approx_gcd(g, d, tol);
        }
        span += dmax;
    }

    if (g == 0.0) {
        SpectralMeasure m;
        m.energies = {base};
        m.weights = {1.0};
        m.mu = base;
        m.sigma = 0.0;
        return m;
    }
    for (auto& dt : dts)
        for (double e : dt.energy) {
            const double d = e - dt.emin;
            if (std::abs(d - g * std::round(d / g)) > tol)
                throw invalid_parameter("fast_commuting_measure: energies not commensurate");
        }

    const std::size_t bins = static_cast<std::size_t>(std::llround(span / g)) + 1;

    // window width: how far back a term reaches from its last site
    std::size_t w = 0;
    for (auto& dt : dts) w = std::max(w, dt.hi - dt.lo);
    const std::size_t states = static_cast<std::size_t>(1) << w;
    if (states > (1u << 20) || states * bins > (static_cast<std::size_t>(1) << 31))
        throw resource_limit("fast_commuting_measure: window x grid too large");

    // terms grouped by their last support site
    std::vector<std::vector<const DiagTerm*>> by_site(N);
    for (auto& dt : dts) by_site[dt.hi].push_back(&dt);

    // increment table per site: delta bins for (old window state, new bit)
    std::vector<double> cur(states * bins, 0.0), nxt(states * bins, 0.0);
    cur[0] = 1.0;

    for (std::size_t site = 0; site < N; ++site) {
        const auto& f = state.factors[site];
        const double p0 = f(0, 0).real();
        const double p1 = f(1, 1).real();
        std::fill(nxt.begin(), nxt.end(), 0.0);

        const std::size_t mask = states - 1;
        for (std::size_t o = 0; o < states; ++o) {
            const double* src = cur.data() + o * bins;
            bool any = false;
            for (std::size_t b = 0; b < bins; ++b)
                if (src[b] != 0.0) { any = true; break; }
            if (!any) continue;
            for (std::size_t bit = 0; bit < 2; ++bit) {
                const double p = bit ? p1 : p0;
                if (p == 0.0) continue;
                // window holds the last w+1 site values: bits of sites
                // (site-w .. site), newest in the low bit
                const std::size_t win = ((o << 1) | bit);
                std::size_t dbin = 0;
                for (const DiagTerm* dt : by_site[site]) {
                    std::size_t cfg = 0;
                    for (std::size_t s : dt->support) {
                        const std::size_t back = site - s; // 0..w
                        cfg = (cfg << 1) | ((win >> back) & 1u);
                    }
                    const double d = dt->energy[cfg] - dt->emin;
                    dbin += static_cast<std::size_t>(std::llround(d / g));
                }
                double* dst = nxt.data() + (win & mask) * bins + dbin;
                for (std::size_t b = 0; b + dbin < bins; ++b) dst[b] += p * src[b];
            }
        }
        std::swap(cur, nxt);
    }

    std::vector<std::pair<double, double>> atoms;
    atoms.reserve(bins);
    std::vector<double> wsum(bins, 0.0);
    for (std::size_t o = 0; o < states; ++o)
        for (std::size_t b = 0; b < bins; ++b) wsum[b] += cur[o * bins + b];
    for (std::size_t b = 0; b < bins; ++b)
        if (wsum[b] > 0.0) atoms.emplace_back(base + static_cast<double>(b) * g, wsum[b]);

    return from_atoms(std::move(atoms), 0.49 * g);
}

StandardizedMeasure standardize(const SpectralMeasure& m, double c0, double E, std::size_t N) {
    if (m.sigma <= 0.0)
        throw degenerate_spectrum("standardize: zero-variance spectral measure");
    StandardizedMeasure out;
    out.measure.energies.resize(m.size());
    out.measure.weights = m.weights;
    for (std::size_t k = 0; k < m.size(); ++k)
        out.measure.energies[k] = (m.energies[k] - m.mu) / m.sigma;
    out.measure.mu = 0.0;
    out.measure.sigma = 1.0;
    out.variance_ok = m.sigma * m.sigma >= c0 * E * E * static_cast<double>(N);
    return out;
}

double gaussian_cdf(double y) {
    if (std::isinf(y)) return y > 0 ? 1.0 : 0.0;
    return 0.5 * std::erfc(-y / std::numbers::sqrt2);
}

double kolmogorov_distance(const SpectralMeasure& m) {
    double F = 0.0, delta = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) {
        const double G = gaussian_cdf(m.energies[k]);
        delta = std::max(delta, std::abs(F - G)); // left limit
        F += m.weights[k];
        delta = std::max(delta, std::abs(F - G));
    }
    return delta;
}

CharacteristicCurve characteristic_function(const SpectralMeasure& m,
                                            const std::vector<double>& grid) {
    CharacteristicCurve c;
    c.path = CharacteristicCurve::Path::eigen_sum;
    c.grid = grid;
    c.values.reserve(grid.size());
    for (double w : grid) c.values.push_back(m.phi(w));
    return c;
}

CharacteristicCurve characteristic_function_evolution(const QuantumState& state,
                                                      const Matrix& H_std,
                                                      const std::vector<double>& grid) {
    check_dim(H_std.rows());
    CharacteristicCurve c;
    c.path = CharacteristicCurve::Path::evolution;
    c.grid = grid;
    c.values.reserve(grid.size());
    for (double w : grid) c.values.push_back(expectation_full(state, expm_i(H_std, w)));
    return c;
}

double omega_star(double R, double D, double E) {
    const double r = std::max(1.0, R);
    const double r2d = std::pow(r, 2.0 * D);
    return 1.0 / (2.0 * std::exp(2.0) * r2d * (r2d + 1.0) * E);
}

std::vector<CumulantPoint> cumulant_window_check(const SpectralMeasure& standardized,
                                                 double sigma_H, std::size_t N, double E,
                                                 double R, double D,
                                                 const std::vector<double>& grid) {
    const double ws = omega_star(R, D, E);
    const double wmax = ws * sigma_H / 2.0;

    std::vector<CumulantPoint> out;
    out.reserve(grid.size());
    double prev_arg = 0.0; // unwrap along the grid from log phi(0) = 0
    for (double w : grid) {
        const cplx p = standardized.phi(w);
        CumulantPoint pt;
        pt.omega = w;
        pt.in_window = (w >= 0.0 && w <= wmax);
        const double mag = std::abs(p);
        double arg = std::arg(p);
        const double twopi = 2.0 * std::numbers::pi;
        while (arg - prev_arg > std::numbers::pi) arg -= twopi;
        while (prev_arg - arg > std::numbers::pi) arg += twopi;
        prev_arg = arg;
        const cplx logphi(std::log(std::max(mag, 1e-300)), arg);
        pt.lhs = std::abs(logphi + cplx(w * w / 2.0, 0.0));
        pt.rhs = (2.0 * static_cast<double>(N) / std::pow(sigma_H, 3)) * std::pow(w / ws, 3);
        pt.violation = pt.in_window && pt.lhs > pt.rhs + 1e-12;
        out.push_back(pt);
    }
    return out;
}

} // namespace qclt
