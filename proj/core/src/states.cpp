#include "qclt/states.hpp"

#include "qclt/eig.hpp"
#include "qclt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace qclt {

namespace {

void validate_density(const Matrix& rho, const char* what) {
    if (rho.rows() != rho.cols()) throw invalid_state(std::string(what) + ": not square");
    if (std::abs(rho.trace() - cplx(1.0, 0.0)) > 1e-12)
        throw invalid_state(std::string(what) + ": trace != 1");
    if (!rho.is_hermitian(1e-12 * std::max(1.0, rho.max_abs())))
        throw invalid_state(std::string(what) + ": not Hermitian");
    auto r = eig_hermitian(rho, false);
    if (r.values.front() < -1e-10)
        throw invalid_state(std::string(what) + ": negative eigenvalue");
}

} // namespace

bool QuantumState::is_maximally_mixed() const {
    if (rep == Rep::product) {
        for (const auto& f : factors) {
            const double d = static_cast<double>(f.rows());
            for (std::size_t i = 0; i < f.rows(); ++i)
                for (std::size_t j = 0; j < f.cols(); ++j) {
                    const cplx want = (i == j) ? cplx(1.0 / d, 0.0) : cplx(0.0, 0.0);
                    if (std::abs(f(i, j) - want) > 1e-14) return false;
                }
        }
        return true;
    }
    const double d = static_cast<double>(rho.rows());
    for (std::size_t i = 0; i < rho.rows(); ++i)
        for (std::size_t j = 0; j < rho.cols(); ++j) {
            const cplx want = (i == j) ? cplx(1.0 / d, 0.0) : cplx(0.0, 0.0);
            if (std::abs(rho(i, j) - want) > 1e-14) return false;
        }
    return true;
}

Matrix QuantumState::dense() const {
    if (rep == Rep::dense) return rho;
    check_dim(static_cast<std::size_t>(1) << N);
    Matrix m(1, 1);
    m(0, 0) = 1.0;
    for (const auto& f : factors) m = kron(m, f);
    return m;
}

QuantumState product_state(const std::vector<Matrix>& factors) {
    if (factors.empty()) throw invalid_state("product_state: no factors");
    for (const auto& f : factors) validate_density(f, "product_state factor");
    QuantumState s;
    s.rep = QuantumState::Rep::product;
    s.N = factors.size();
    s.factors = factors;
    return s;
}

QuantumState dense_state(const Matrix& rho, std::size_t N) {
    if (rho.rows() != (static_cast<std::size_t>(1) << N))
        throw invalid_state("dense_state: dimension mismatch");
    validate_density(rho, "dense_state");
    QuantumState s;
    s.rep = QuantumState::Rep::dense;
    s.N = N;
    s.rho = rho;
    return s;
}

QuantumState gibbs_state(const Matrix& H, double beta, std::size_t N) {
    if (beta < 0) throw invalid_parameter("gibbs_state: beta must be >= 0");
    check_dim(H.rows());
    auto eg = eig_hermitian(H, true);
    const std::size_t dim = H.rows();
    // shift by the ground energy for numerical sanity
    const double e0 = eg.values.front();
    std::vector<double> w(dim);
    double Z = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        w[i] = std::exp(-beta * (eg.values[i] - e0));
        Z += w[i];
    }
    Matrix rho(dim, dim);
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b) {
            cplx acc = 0.0;
            for (std::size_t i = 0; i < dim; ++i)
                acc += eg.vectors(a, i) * (w[i] / Z) * std::conj(eg.vectors(b, i));
            rho(a, b) = acc;
        }
    QuantumState s;
    s.rep = QuantumState::Rep::dense;
    s.N = N;
    s.rho = std::move(rho);
    s.gibbs = true;
    s.beta = beta;
    return s;
}

QuantumState maximally_mixed(std::size_t N) {
    Matrix half(2, 2);
    half(0, 0) = 0.5;
    half(1, 1) = 0.5;
    return product_state(std::vector<Matrix>(N, half));
}

cplx expectation(const QuantumState& state, const LocalOperator& op) {
    if (state.rep == QuantumState::Rep::product) {
        Matrix rho_sup(1, 1);
        rho_sup(0, 0) = 1.0;
        for (auto s : op.support) {
            if (s >= state.N) throw invalid_parameter("expectation: support out of range");
            rho_sup = kron(rho_sup, state.factors[s]);
        }
        return trace_product(rho_sup, op.block);
    }
    return trace_product(state.rho, embed(op, state.N));
}

cplx expectation_full(const QuantumState& state, const Matrix& full) {
    if (state.rep == QuantumState::Rep::dense) return trace_product(state.rho, full);
    if (state.is_maximally_mixed()) return full.trace() / static_cast<double>(full.rows());
    return trace_product(state.dense(), full);
}

LocalOperator local_product(const LocalOperator& A, const LocalOperator& B) {
    std::vector<std::size_t> sites = A.support;
    sites.insert(sites.end(), B.support.begin(), B.support.end());
    std::sort(sites.begin(), sites.end());
    sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
    const std::size_t k = sites.size();
    check_dim(static_cast<std::size_t>(1) << k);

    auto relabel = [&](const LocalOperator& op) {
        LocalOperator r = op;
        for (auto& s : r.support)
            s = static_cast<std::size_t>(std::lower_bound(sites.begin(), sites.end(), s) -
                                         sites.begin());
        return embed(r, k);
    };
    LocalOperator out;
    out.support = sites;
    out.block = relabel(A) * relabel(B);
    return out;
}

double connected_correlator(const QuantumState& state, const LocalOperator& A,
                            const LocalOperator& B) {
    const cplx ab = expectation(state, local_product(A, B));
    const cplx a = expectation(state, A);
    const cplx b = expectation(state, B);
    return std::abs(ab - a * b);
}

double DecayFit::alpha(double r) const {
    switch (model) {
        case DecayModel::uncorrelated: return 0.0;
        case DecayModel::exponential: return L0 * std::exp(-r / xi);
        case DecayModel::algebraic: return L0 * std::pow(r, -power);
    }
    return 0.0;
}

std::string DecayFit::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"model\":\"";
    switch (model) {
        case DecayModel::uncorrelated: os << "uncorrelated"; break;
        case DecayModel::exponential: os << "exponential"; break;
        case DecayModel::algebraic: os << "algebraic"; break;
    }
    os << "\",\"L0\":" << L0 << ",\"xi_or_power\":"
       << (model == DecayModel::algebraic ? power : xi) << ",\"residual\":" << residual
       << ",\"convention\":\""
       << (convention == PrefactorConvention::with_min_support ? "with_min_support" : "without")
       << "\"}";
    return os.str();
}

DecayFit fit_alpha(const QuantumState& state, const Lattice& lat, DecayModel model,
                   PrefactorConvention convention,
                   const std::vector<LocalOperator>* probe_family) {
    // default probe family: single-site X, Y, Z at every site (unit norm)
    std::vector<LocalOperator> probes;
    if (probe_family) {
        probes = *probe_family;
    } else {
        for (std::size_t s = 0; s < lat.N; ++s)
            for (char p : {'X', 'Y', 'Z'}) probes.push_back(pauli_string({s}, std::string(1, p)));
    }

    std::vector<double> norms(probes.size());
    for (std::size_t i = 0; i < probes.size(); ++i) norms[i] = spectral_norm(probes[i].block);

    // envelope per set distance
    std::map<int, double> env;
    for (std::size_t i = 0; i < probes.size(); ++i)
        for (std::size_t j = 0; j < probes.size(); ++j) {
            if (i == j) continue;
            const int dist = set_distance(lat, probes[i].support, probes[j].support);
            if (dist < 1) continue;
            const double pre =
                convention == PrefactorConvention::with_min_support
                    ? static_cast<double>(
                          std::min(probes[i].support.size(), probes[j].support.size()))
                    : 1.0;
            const double c = connected_correlator(state, probes[i], probes[j]) /
                             (norms[i] * norms[j] * pre);
            auto it = env.find(dist);
            if (it == env.end() || c > it->second) env[dist] = c;
        }

    if (env.size() < 3) throw insufficient_data("fit_alpha: fewer than 3 distinct distances");

    DecayFit fit;
    fit.convention = convention;

    double peak = 0.0;
    for (auto& [d, v] : env) peak = std::max(peak, v);
    if (peak <= 1e-12) {
        fit.model = DecayModel::uncorrelated;
        fit.L0 = 0.0;
        return fit;
    }

    // least squares on log(envelope); only points clearly above noise
    std::vector<double> xs, ys;
    std::vector<std::pair<double, double>> samples;
    for (auto& [d, v] : env) {
        samples.emplace_back(static_cast<double>(d), v);
        if (v > 1e-13) {
            xs.push_back(model == DecayModel::algebraic ? std::log(static_cast<double>(d))
                                                        : static_cast<double>(d));
            ys.push_back(std::log(v));
        }
    }
    if (xs.size() < 2) throw insufficient_data("fit_alpha: not enough nonzero samples");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    if (slope >= 0) throw invalid_parameter("fit_alpha: correlations do not decay with distance");

    fit.model = model;
    fit.L0 = std::exp(intercept);
    if (model == DecayModel::algebraic)
        fit.power = -slope;
    else
        fit.xi = -1.0 / slope;

    // enforce the envelope property: inflate L0 to cover every sample
    double worst = 0.0;
    for (auto& [d, v] : samples) {
        const double a = fit.alpha(d);
        if (a > 0) worst = std::max(worst, v / a);
    }
    fit.residual = std::max(0.0, worst - 1.0);
    if (worst > 1.0) fit.L0 *= worst;
    return fit;
}

} // namespace qclt
