#include "qclt/sweep.hpp"

#include "qclt/bounds.hpp"
#include "qclt/errors.hpp"
#include "qclt/models.hpp"
#include "qclt/operators.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace qclt {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

DecayFit parse_decay(const std::string& spec) {
    DecayFit fit;
    if (spec == "none" || spec.empty()) return fit;
    const auto colon = spec.find(':');
    const auto comma = spec.find(',', colon);
    if (colon == std::string::npos || comma == std::string::npos)
        throw invalid_parameter("decay spec must be exp:L0,xi or alg:L0,p");
    const double a = std::stod(spec.substr(colon + 1, comma - colon - 1));
    const double b = std::stod(spec.substr(comma + 1));
    if (spec.rfind("exp:", 0) == 0) {
        fit.model = DecayModel::exponential;
        fit.L0 = a;
        fit.xi = b;
    } else if (spec.rfind("alg:", 0) == 0) {
        fit.model = DecayModel::algebraic;
        fit.L0 = a;
        fit.power = b;
    } else {
        throw invalid_parameter("decay spec must start with exp: or alg:");
    }
    return fit;
}

bool commuting_family(const std::string& model) {
    return model == "zz-chain" || model == "field";
}

// direct construction avoids the O(N^2) lattice metric at large N
HamiltonianModel big_chain_model(const std::string& name, std::size_t N) {
    HamiltonianModel model;
    model.N = N;
    model.E = 1.0;
    if (name == "zz-chain") {
        model.R = 1;
        for (std::size_t i = 0; i + 1 < N; ++i) {
            Term t;
            t.anchor = i;
            t.op = pauli_string({i, i + 1}, "ZZ");
            model.terms.push_back(std::move(t));
        }
    } else if (name == "field") {
        model.R = 0;
        for (std::size_t i = 0; i < N; ++i) {
            Term t;
            t.anchor = i;
            t.op = pauli_string({i}, "Z");
            model.terms.push_back(std::move(t));
        }
    } else {
        throw invalid_parameter("model family '" + name + "' needs the exact path");
    }
    return model;
}

constexpr std::size_t kLatticeSizeCap = 4096; // dense metric above this is wasteful

} // namespace

SweepConfig SweepConfig::from_json(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw invalid_parameter(std::string("sweep config parse error: ") + e.what());
    }
    SweepConfig cfg;
    cfg.model = doc.value("model", cfg.model);
    cfg.lattice = doc.value("lattice", cfg.lattice);
    cfg.state = doc.value("state", cfg.state);
    if (doc.contains("N")) cfg.N_list = doc["N"].get<std::vector<std::size_t>>();
    const std::string path = doc.value("path", std::string("auto"));
    if (path == "auto")
        cfg.path = SweepPath::auto_select;
    else if (path == "exact")
        cfg.path = SweepPath::exact;
    else if (path == "fast_commuting")
        cfg.path = SweepPath::fast_commuting;
    else
        throw invalid_parameter("unknown path: " + path);
    cfg.seed = doc.value("seed", cfg.seed);
    cfg.c0 = doc.value("c0", cfg.c0);
    if (doc.contains("esseen")) {
        cfg.esseen.C = doc["esseen"].value("C", cfg.esseen.C);
        cfg.esseen.quadrature_tol =
            doc["esseen"].value("quadrature_tol", cfg.esseen.quadrature_tol);
        if (doc["esseen"].contains("omegas"))
            cfg.esseen_omegas = doc["esseen"]["omegas"].get<std::vector<double>>();
    }
    cfg.decay = doc.value("decay", cfg.decay);
    cfg.output_dir = doc.value("output_dir", cfg.output_dir);
    return cfg;
}

std::string SweepConfig::to_json() const {
    nlohmann::json doc;
    doc["model"] = model;
    doc["lattice"] = lattice;
    doc["state"] = state;
    doc["N"] = N_list;
    doc["path"] = path == SweepPath::auto_select
                      ? "auto"
                      : (path == SweepPath::exact ? "exact" : "fast_commuting");
    doc["seed"] = seed;
    doc["c0"] = c0;
    doc["esseen"] = {{"C", esseen.C},
                     {"quadrature_tol", esseen.quadrature_tol},
                     {"omegas", esseen_omegas}};
    doc["decay"] = decay;
    doc["output_dir"] = output_dir;
    return doc.dump();
}

SweepResult run_sweep(const SweepConfig& cfg) {
    if (cfg.N_list.empty()) throw invalid_parameter("run_sweep: empty N list");
    for (std::size_t i = 1; i < cfg.N_list.size(); ++i)
        if (cfg.N_list[i] <= cfg.N_list[i - 1])
            throw invalid_parameter("run_sweep: N list must be strictly ascending");
    if (cfg.lattice != "chain" && cfg.lattice != "ring")
        throw invalid_parameter("run_sweep: lattice must be chain or ring");
    const DecayFit decay = parse_decay(cfg.decay);

    SweepResult result;
    for (std::size_t N : cfg.N_list) {
        SweepRow row;
        row.N = N;
        const auto start = std::chrono::steady_clock::now();
        try {
            const bool fast_ok = commuting_family(cfg.model) && cfg.lattice == "chain" &&
                                 cfg.state.rfind("gibbs", 0) != 0;
            bool use_fast;
            switch (cfg.path) {
            case SweepPath::fast_commuting:
                if (!fast_ok)
                    throw invalid_parameter("fast path needs a diagonal chain family and a "
                                            "product state");
                use_fast = true;
                break;
            case SweepPath::exact: use_fast = false; break;
            default: use_fast = fast_ok; // the cheap path agrees with the exact one
            }

            HamiltonianModel model;
            if (N <= kLatticeSizeCap) {
                Lattice lat = build_lattice(cfg.lattice == "chain" ? LatticeKind::chain
                                                                   : LatticeKind::ring,
                                            {N}, cfg.lattice == "ring");
                model = model_by_name(cfg.model, lat, cfg.seed);
            } else {
                model = big_chain_model(cfg.model, N);
            }
            QuantumState state = state_by_name(cfg.state, model);

            SpectralMeasure measure;
            if (use_fast) {
                measure = fast_commuting_measure(model, state);
            } else {
                check_dim(std::size_t(1) << N);
                measure = spectral_measure(dense_hamiltonian(model), state);
            }
            row.sigma2 = measure.sigma * measure.sigma;

            StandardizedMeasure std_m = standardize(measure, cfg.c0, model.E, N);
            row.variance_ok = std_m.variance_ok;
            row.delta = kolmogorov_distance(std_m.measure);

            row.esseen_rhs_min = std::numeric_limits<double>::infinity();
            for (double omega : cfg.esseen_omegas) {
                EsseenConfig ec = cfg.esseen;
                ec.Omega = omega < 0.0 ? std::sqrt(static_cast<double>(N)) : omega;
                row.esseen_rhs_min =
                    std::min(row.esseen_rhs_min, esseen_rhs(std_m.measure, ec));
            }

            // explicit-rate bound when a decay model is supplied; product-state
            // bound otherwise (when the state qualifies)
            ModelParams mp;
            mp.N = N;
            mp.D = 1;
            mp.c_D = 2.0;
            mp.R = std::max(1, model.R);
            mp.E = model.E;
            mp.c0 = cfg.c0;
            mp.sigma_H = measure.sigma;
            mp.decay = decay;
            mp.commuting = commuting_family(cfg.model);
            BoundReport bound;
            bool have_bound = false;
            if (decay.model == DecayModel::exponential) {
                bound = theorem_bound(mp, TheoremVariant::exponential, 0.0, cfg.esseen.C);
                have_bound = true;
            } else if (decay.model == DecayModel::algebraic) {
                const double beta = decay.power - mp.D;
                const double eps_max =
                    (beta - mp.D - 1.0) / (2.0 * (beta + 3.0 * mp.D - 1.0));
                bound = theorem_bound(mp, TheoremVariant::algebraic, eps_max / 2.0,
                                      cfg.esseen.C);
                have_bound = true;
            } else if (state.rep == QuantumState::Rep::product) {
                bound = product_bound(mp, cfg.esseen.C);
                have_bound = true;
            }
            if (have_bound && bound.applicable) row.thm_bound = bound.delta_bound;
        } catch (const resource_limit& e) {
            row.skipped = true;
            row.skip_reason = e.what();
        } catch (const window_violation& e) {
            row.skipped = true;
            row.skip_reason = e.what();
        }
        row.runtime_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - start)
                             .count();
        result.rows.push_back(std::move(row));
    }

    std::size_t usable = 0;
    for (const auto& r : result.rows)
        if (!r.skipped && r.delta > 0.0) ++usable;
    if (usable >= 4) result.fit = fit_scaling(result);
    return result;
}

ScalingFit fit_scaling(const SweepResult& result) {
    std::vector<double> x, y;
    for (const auto& r : result.rows)
        if (!r.skipped && r.delta > 0.0) {
            x.push_back(std::log(static_cast<double>(r.N)));
            y.push_back(std::log(r.delta));
        }
    if (x.size() < 4) throw insufficient_data("fit_scaling: need at least 4 usable rows");
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) { sx += x[i]; sy += y[i]; }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw insufficient_data("fit_scaling: degenerate N range");
    ScalingFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double resid = y[i] - fit.intercept - fit.slope * x[i];
        ssr += resid * resid;
    }
    fit.stderr_slope = x.size() > 2 ? std::sqrt(ssr / (n - 2.0) / sxx) : 0.0;
    fit.rows_used = x.size();
    return fit;
}

std::string SweepResult::to_csv(bool include_runtime) const {
    std::ostringstream os;
    os << "N,sigma2,variance_ok,delta,esseen_rhs_min,thm_bound,skipped,skip_reason";
    if (include_runtime) os << ",runtime_ms";
    os << "\n";
    for (const auto& r : rows) {
        os << r.N << "," << fmt(r.sigma2) << "," << (r.variance_ok ? 1 : 0) << ","
           << fmt(r.delta) << "," << fmt(r.esseen_rhs_min) << ","
           << (r.thm_bound ? fmt(*r.thm_bound) : std::string("na")) << ","
           << (r.skipped ? 1 : 0) << "," << r.skip_reason;
        if (include_runtime) os << "," << fmt(r.runtime_ms);
        os << "\n";
    }
    return os.str();
}

std::string SweepResult::to_json() const {
    nlohmann::json doc;
    doc["rows"] = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json jr;
        jr["N"] = r.N;
        jr["sigma2"] = r.sigma2;
        jr["variance_ok"] = r.variance_ok;
        jr["delta"] = r.delta;
        jr["esseen_rhs_min"] = r.esseen_rhs_min;
        if (r.thm_bound)
            jr["thm_bound"] = *r.thm_bound;
        else
            jr["thm_bound"] = nullptr;
        jr["skipped"] = r.skipped;
        jr["skip_reason"] = r.skip_reason;
        jr["runtime_ms"] = r.runtime_ms;
        doc["rows"].push_back(jr);
    }
    if (fit) {
        doc["fit"] = {{"slope", fit->slope},
                      {"intercept", fit->intercept},
                      {"stderr", fit->stderr_slope},
                      {"rows_used", fit->rows_used}};
    }
    return doc.dump(2);
}

void write_artifacts(const SweepResult& result, const SweepConfig& cfg,
                     const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    {
        std::ofstream csv(fs::path(dir) / "results.csv");
        csv << result.to_csv(true);
    }
    {
        std::ofstream js(fs::path(dir) / "results.json");
        js << result.to_json() << "\n";
    }
    {
        // FNV-1a hash of the canonical config text
        const std::string text = cfg.to_json();
        std::uint64_t h = 1469598103934665603ull;
        for (unsigned char c : text) {
            h ^= c;
            h *= 1099511628211ull;
        }
        nlohmann::json meta;
        meta["config"] = nlohmann::json::parse(text);
        meta["config_hash"] = h;
        meta["seed"] = cfg.seed;
        meta["version"] = "qclt 0.1.0";
        std::ofstream ms(fs::path(dir) / "metadata.json");
        ms << meta.dump(2) << "\n";
    }
}

} // namespace qclt
