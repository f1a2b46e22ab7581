// Command-line front end: spectra, Kolmogorov distances, smoothing-inequality
// checks, explicit bounds, scaling sweeps, and brute-force certificates.
//
// Exit codes: 0 success; 2 invalid configuration; 3 precondition/window
// violation; 4 a certified inequality was empirically falsified.

#include "qclt/bounds.hpp"
#include "qclt/decomposition.hpp"
#include "qclt/esseen.hpp"
#include "qclt/models.hpp"
#include "qclt/errors.hpp"
#include "qclt/sweep.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace qclt;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitWindow = 3;
constexpr int kExitFalsified = 4;

struct CommonOpts {
    std::string model = "zz-chain";
    std::string lattice = "chain";
    std::string state = "maximally-mixed";
    std::size_t n = 8;
    std::uint64_t seed = 1;
    double c0 = 0.5;
    bool json = false;
    std::string terms_file;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--model", o.model, "model family (zz-chain, transverse-field[:g], field, random-2local)");
    cmd->add_option("--lattice", o.lattice, "chain or ring");
    cmd->add_option("--state", o.state, "maximally-mixed, product-zero, product-plus, gibbs:beta");
    cmd->add_option("--n", o.n, "number of sites");
    cmd->add_option("--seed", o.seed, "seed for random families");
    cmd->add_option("--c0", o.c0, "variance-condition constant");
    cmd->add_option("--terms-file", o.terms_file, "JSON term list overriding --model");
    cmd->add_flag("--json", o.json, "machine-readable output");
}

Lattice make_lattice(const CommonOpts& o) {
    if (o.lattice == "chain") return build_lattice(LatticeKind::chain, {o.n}, false);
    if (o.lattice == "ring") return build_lattice(LatticeKind::ring, {o.n}, true);
    throw invalid_parameter("lattice must be chain or ring");
}

HamiltonianModel make_model(const CommonOpts& o, const Lattice& lat) {
    if (!o.terms_file.empty()) {
        std::ifstream in(o.terms_file);
        if (!in) throw invalid_parameter("cannot open terms file: " + o.terms_file);
        std::stringstream ss;
        ss << in.rdbuf();
        return build_hamiltonian(terms_from_json(ss.str(), lat), lat);
    }
    return model_by_name(o.model, lat, o.seed);
}

struct MeasureBundle {
    HamiltonianModel model;
    QuantumState state;
    SpectralMeasure measure;
    StandardizedMeasure standardized;
};

MeasureBundle compute_measure(const CommonOpts& o) {
    MeasureBundle b;
    const Lattice lat = make_lattice(o);
    b.model = make_model(o, lat);
    b.state = state_by_name(o.state, b.model);
    try {
        b.measure = fast_commuting_measure(b.model, b.state);
    } catch (const invalid_parameter&) {
        b.measure = spectral_measure(dense_hamiltonian(b.model), b.state);
    }
    b.standardized = standardize(b.measure, o.c0, b.model.E, b.model.N);
    return b;
}

int run_spectrum(const CommonOpts& o, bool full) {
    MeasureBundle b = compute_measure(o);
    if (o.json) {
        nlohmann::json doc;
        doc["N"] = b.model.N;
        doc["atoms"] = b.measure.size();
        doc["mu"] = b.measure.mu;
        doc["sigma"] = b.measure.sigma;
        doc["variance_ok"] = b.standardized.variance_ok;
        if (full) {
            doc["energies"] = b.measure.energies;
            doc["weights"] = b.measure.weights;
        }
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "atoms=" << b.measure.size() << " mu=" << b.measure.mu
                  << " sigma=" << b.measure.sigma
                  << " variance_ok=" << b.standardized.variance_ok << "\n";
        if (full)
            for (std::size_t i = 0; i < b.measure.size(); ++i)
                std::cout << b.measure.energies[i] << " " << b.measure.weights[i] << "\n";
    }
    return kExitOk;
}

int run_delta(const CommonOpts& o) {
    MeasureBundle b = compute_measure(o);
    const double delta = kolmogorov_distance(b.standardized.measure);
    if (o.json) {
        nlohmann::json doc;
        doc["delta"] = delta;
        doc["sigma2"] = b.measure.sigma * b.measure.sigma;
        doc["variance_ok"] = b.standardized.variance_ok;
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout.precision(17);
        std::cout << "delta=" << delta << "\n";
    }
    return kExitOk;
}

int run_phi(const CommonOpts& o, double omega_max, std::size_t points) {
    if (omega_max <= 0.0 || points == 0)
        throw invalid_parameter("phi: need positive --omega-max and --points");
    MeasureBundle b = compute_measure(o);
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = omega_max * static_cast<double>(i + 1) / static_cast<double>(points);
    const CharacteristicCurve curve = characteristic_function(b.standardized.measure, grid);
    if (o.json) {
        nlohmann::json doc = nlohmann::json::array();
        for (std::size_t i = 0; i < points; ++i)
            doc.push_back({{"omega", grid[i]},
                           {"re", curve.values[i].real()},
                           {"im", curve.values[i].imag()}});
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout.precision(17);
        for (std::size_t i = 0; i < points; ++i)
            std::cout << grid[i] << " " << curve.values[i].real() << " "
                      << curve.values[i].imag() << "\n";
    }
    return kExitOk;
}

int run_esseen(const CommonOpts& o, double C) {
    MeasureBundle b = compute_measure(o);
    EsseenConfig cfg;
    cfg.C = C;
    const std::vector<double> omegas = {1.0, 2.0, 5.0, 10.0,
                                        std::sqrt(static_cast<double>(b.model.N))};
    const EsseenReport rep = verify_esseen(b.standardized.measure, omegas, cfg);
    if (o.json)
        std::cout << rep.to_json() << "\n";
    else {
        std::cout.precision(17);
        std::cout << "delta=" << rep.delta << " min_rhs=" << rep.min_rhs
                  << " holds=" << rep.holds << "\n";
    }
    return rep.holds ? kExitOk : kExitFalsified;
}

int run_bound(const CommonOpts& o, const std::string& decay_spec, double eps, double C) {
    MeasureBundle b = compute_measure(o);
    ModelParams mp;
    mp.N = b.model.N;
    mp.D = 1;
    mp.c_D = 2.0;
    mp.R = std::max(1, b.model.R);
    mp.E = b.model.E;
    mp.c0 = o.c0;
    mp.sigma_H = b.measure.sigma;
    mp.commuting = true;
    for (const Term& t : b.model.terms)
        if (!t.op.block.is_hermitian(1e-12 * std::max(1.0, t.op.block.max_abs())))
            mp.commuting = false;
    BoundReport rep;
    if (decay_spec == "product") {
        rep = product_bound(mp, C);
    } else {
        if (decay_spec.rfind("exp:", 0) == 0) {
            const auto comma = decay_spec.find(',');
            if (comma == std::string::npos)
                throw invalid_parameter("--decay exp:L0,xi");
            mp.decay.model = DecayModel::exponential;
            mp.decay.L0 = std::stod(decay_spec.substr(4, comma - 4));
            mp.decay.xi = std::stod(decay_spec.substr(comma + 1));
            rep = theorem_bound(mp, TheoremVariant::exponential, eps, C);
        } else if (decay_spec.rfind("alg:", 0) == 0) {
            const auto comma = decay_spec.find(',');
            if (comma == std::string::npos)
                throw invalid_parameter("--decay alg:L0,p");
            mp.decay.model = DecayModel::algebraic;
            mp.decay.L0 = std::stod(decay_spec.substr(4, comma - 4));
            mp.decay.power = std::stod(decay_spec.substr(comma + 1));
            rep = theorem_bound(mp, TheoremVariant::algebraic, eps, C);
        } else if (decay_spec == "fit") {
            const Lattice lat = make_lattice(o);
            mp.decay = fit_alpha(b.state, lat, DecayModel::exponential);
            rep = theorem_bound(mp, TheoremVariant::exponential, eps, C);
        } else {
            throw invalid_parameter("--decay must be product, fit, exp:L0,xi or alg:L0,p");
        }
    }
    if (o.json)
        std::cout << rep.to_json() << "\n";
    else {
        std::cout.precision(17);
        std::cout << "applicable=" << rep.applicable;
        if (rep.applicable) std::cout << " delta_bound=" << rep.delta_bound;
        std::cout << "\n";
        for (const auto& pc : rep.validity)
            std::cout << "  [" << (pc.holds ? "ok" : "FAIL") << "] " << pc.name << "\n";
    }
    return rep.applicable ? kExitOk : kExitWindow;
}

int run_sweep_cmd(const std::string& config_file, SweepConfig overrides,
                  const std::vector<std::size_t>& n_list, bool have_model, bool have_state,
                  bool json) {
    SweepConfig cfg;
    if (!config_file.empty()) {
        std::ifstream in(config_file);
        if (!in) throw invalid_parameter("cannot open config: " + config_file);
        std::stringstream ss;
        ss << in.rdbuf();
        cfg = SweepConfig::from_json(ss.str());
    }
    if (have_model) cfg.model = overrides.model;
    if (have_state) cfg.state = overrides.state;
    if (!n_list.empty()) cfg.N_list = n_list;
    if (!overrides.output_dir.empty()) cfg.output_dir = overrides.output_dir;
    if (overrides.seed != 1) cfg.seed = overrides.seed;
    const SweepResult result = run_sweep(cfg);
    if (!cfg.output_dir.empty()) write_artifacts(result, cfg, cfg.output_dir);
    if (json)
        std::cout << result.to_json() << "\n";
    else
        std::cout << result.to_csv(true);
    return kExitOk;
}

int run_verify_lemma1(const CommonOpts& o, long l, long M, long K, double omega_max,
                      std::size_t points) {
    const Lattice lat = make_lattice(o);
    const HamiltonianModel model = make_model(o, lat);
    const QuantumState state = state_by_name(o.state, model);
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = omega_max * static_cast<double>(i + 1) / static_cast<double>(points);
    const OdeResidualReport rep = verify_ode_residual(state, model, lat, l, M, K, grid);
    const double contract = 1e-8 * rep.max_scale;
    const bool ok = rep.max_residual <= contract;
    if (o.json) {
        nlohmann::json doc;
        doc["max_residual"] = rep.max_residual;
        doc["contract"] = contract;
        doc["holds"] = ok;
        doc["residuals"] = rep.residuals;
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout.precision(17);
        std::cout << "max_residual=" << rep.max_residual << " contract=" << contract
                  << " holds=" << ok << "\n";
    }
    return ok ? kExitOk : kExitFalsified;
}

int run_cluster_check(std::size_t instances, std::uint64_t seed, std::size_t sites, int n_max,
                      long M, bool json) {
    if (sites < 2 || sites > 8) throw invalid_parameter("cluster-check: 2 <= sites <= 8");
    const Lattice lat = build_lattice(LatticeKind::chain, {sites}, false);
    std::vector<double> omegas;
    for (int i = 1; i <= 10; ++i) omegas.push_back(0.01 * i);
    nlohmann::json all = nlohmann::json::array();
    std::size_t violations = 0;
    for (std::size_t inst = 0; inst < instances; ++inst) {
        const auto xt = random_local_terms(lat, seed * 1000003ull + 2 * inst, sites, 2);
        const auto yt = random_local_terms(lat, seed * 1000003ull + 2 * inst + 1, sites, 2);
        const CertificateReport rep =
            cluster_certificates(xt, yt, lat, 1, 2.0, n_max, M, omegas);
        if (!rep.all_hold) ++violations;
        if (json) all.push_back(nlohmann::json::parse(rep.to_json()));
    }
    if (json) {
        nlohmann::json doc;
        doc["instances"] = instances;
        doc["violations"] = violations;
        doc["reports"] = all;
        std::cout << doc.dump() << "\n";
    } else {
        std::cout << "instances=" << instances << " violations=" << violations << "\n";
    }
    return violations == 0 ? kExitOk : kExitFalsified;
}

int run_dim_cert(const CommonOpts& o) {
    const Lattice lat = make_lattice(o);
    const DimensionCertificate cert = dimension_certificate(lat);
    if (o.json) {
        nlohmann::json doc;
        doc["D"] = cert.D;
        doc["c_D"] = cert.c_D;
        doc["max_shell_counts"] = cert.max_shell_counts;
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "D=" << cert.D << " c_D=" << cert.c_D << "\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum central-limit verification toolkit"};
    app.require_subcommand(1);

    CommonOpts spectrum_o, delta_o, phi_o, esseen_o, bound_o, lemma_o, dim_o;
    bool spectrum_full = false;
    double phi_omega_max = 5.0;
    std::size_t phi_points = 100;
    double esseen_C = 3.05;
    std::string bound_decay = "product";
    double bound_eps = 0.0, bound_C = 3.05;
    long lemma_l = 2, lemma_M = 1, lemma_K = 1;
    double lemma_omega_max = 1.0;
    std::size_t lemma_points = 20;
    std::string sweep_config;
    SweepConfig sweep_overrides;
    std::vector<std::size_t> sweep_n;
    bool sweep_json = false;
    std::size_t cc_instances = 100, cc_sites = 6;
    std::uint64_t cc_seed = 7;
    int cc_nmax = 5;
    long cc_M = 6;
    bool cc_json = false;

    auto* spectrum = app.add_subcommand("spectrum", "energy measure of a model/state pair");
    add_common(spectrum, spectrum_o);
    spectrum->add_flag("--full", spectrum_full, "print every atom");

    auto* delta = app.add_subcommand("delta", "Kolmogorov distance to the Gaussian");
    add_common(delta, delta_o);

    auto* phi = app.add_subcommand("phi", "characteristic function on a grid");
    add_common(phi, phi_o);
    phi->add_option("--omega-max", phi_omega_max);
    phi->add_option("--points", phi_points);

    auto* esseen = app.add_subcommand("esseen", "smoothing-inequality certificate");
    add_common(esseen, esseen_o);
    esseen->add_option("--constant", esseen_C, "smoothing constant C");

    auto* bound = app.add_subcommand("bound", "explicit convergence-rate bound");
    add_common(bound, bound_o);
    bound->add_option("--decay", bound_decay, "product | fit | exp:L0,xi | alg:L0,p");
    bound->add_option("--eps", bound_eps, "rate-tradeoff parameter (algebraic decay)");
    bound->add_option("--constant", bound_C, "smoothing constant C");

    auto* sweep = app.add_subcommand("sweep", "scaling sweep over system sizes");
    sweep->add_option("--config", sweep_config, "JSON config file");
    sweep->add_option("--model", sweep_overrides.model);
    sweep->add_option("--state", sweep_overrides.state);
    sweep->add_option("--n", sweep_n, "system sizes");
    sweep->add_option("--seed", sweep_overrides.seed);
    sweep->add_option("--out", sweep_overrides.output_dir, "artifact directory");
    sweep->add_flag("--json", sweep_json);

    auto* lemma = app.add_subcommand("verify-lemma1",
                                     "exactness of the characteristic-function ODE");
    add_common(lemma, lemma_o);
    lemma->add_option("--l", lemma_l, "shell width multiplier");
    lemma->add_option("--m", lemma_M, "series truncation order");
    lemma->add_option("--k", lemma_K, "number of layers");
    lemma->add_option("--omega-max", lemma_omega_max);
    lemma->add_option("--points", lemma_points);

    auto* cluster = app.add_subcommand("cluster-check",
                                       "brute-force series norm/support certificates");
    cluster->add_option("--instances", cc_instances);
    cluster->add_option("--seed", cc_seed);
    cluster->add_option("--sites", cc_sites);
    cluster->add_option("--nmax", cc_nmax);
    cluster->add_option("--m", cc_M);
    cluster->add_flag("--json", cc_json);

    auto* dim = app.add_subcommand("dim-cert", "lattice dimension certificate");
    add_common(dim, dim_o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (spectrum->parsed()) return run_spectrum(spectrum_o, spectrum_full);
        if (delta->parsed()) return run_delta(delta_o);
        if (phi->parsed()) return run_phi(phi_o, phi_omega_max, phi_points);
        if (esseen->parsed()) return run_esseen(esseen_o, esseen_C);
        if (bound->parsed()) return run_bound(bound_o, bound_decay, bound_eps, bound_C);
        if (sweep->parsed())
            return run_sweep_cmd(sweep_config, sweep_overrides, sweep_n,
                                 sweep->count("--model") > 0, sweep->count("--state") > 0,
                                 sweep_json);
        if (lemma->parsed())
            return run_verify_lemma1(lemma_o, lemma_l, lemma_M, lemma_K, lemma_omega_max,
                                     lemma_points);
        if (cluster->parsed())
            return run_cluster_check(cc_instances, cc_seed, cc_sites, cc_nmax, cc_M, cc_json);
        if (dim->parsed()) return run_dim_cert(dim_o);
    } catch (const window_violation& e) {
        std::cerr << "window violation: " << e.what() << "\n";
        for (const auto& f : e.failed) std::cerr << "  failed: " << f << "\n";
        return kExitWindow;
    } catch (const invalid_parameter& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kExitConfig;
    } catch (const invalid_state& e) {
        std::cerr << "invalid state: " << e.what() << "\n";
        return kExitConfig;
    } catch (const resource_limit& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
