#include "qclt/models.hpp"

#include "qclt/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <random>

namespace qclt {

namespace {

Term make_term(std::size_t anchor, const std::vector<std::size_t>& sites,
               const std::string& paulis, cplx coeff) {
    Term t;
    t.anchor = anchor;
    t.op = pauli_string(sites, paulis, coeff);
    return t;
}

} // namespace

HamiltonianModel zz_chain(const Lattice& lat, double coupling) {
    if (lat.N < 2) throw invalid_parameter("zz_chain: need at least 2 sites");
    std::vector<Term> terms;
    const std::size_t bonds = lat.wrap ? lat.N : lat.N - 1;
    for (std::size_t i = 0; i < bonds; ++i)
        terms.push_back(make_term(i, {i, (i + 1) % lat.N}, "ZZ", coupling));
    return build_hamiltonian(terms, lat);
}

HamiltonianModel transverse_field_chain(const Lattice& lat, double g) {
    if (lat.N < 2) throw invalid_parameter("transverse_field_chain: need at least 2 sites");
    std::vector<Term> terms;
    const std::size_t bonds = lat.wrap ? lat.N : lat.N - 1;
    for (std::size_t i = 0; i < bonds; ++i)
        terms.push_back(make_term(i, {i, (i + 1) % lat.N}, "ZZ", 1.0));
    for (std::size_t i = 0; i < lat.N; ++i) terms.push_back(make_term(i, {i}, "X", g));
    return build_hamiltonian(terms, lat);
}

HamiltonianModel field_model(const Lattice& lat, double h) {
    std::vector<Term> terms;
    for (std::size_t i = 0; i < lat.N; ++i) terms.push_back(make_term(i, {i}, "Z", h));
    return build_hamiltonian(terms, lat);
}

std::vector<Term> random_local_terms(const Lattice& lat, std::uint64_t seed,
                                     std::size_t n_terms, int max_support) {
    if (max_support < 1 || max_support > 2)
        throw invalid_parameter("random_local_terms: supports of 1 or 2 sites only");
    std::mt19937_64 rng(seed);
    const char letters[3] = {'X', 'Y', 'Z'};
    std::vector<Term> terms;
    for (std::size_t t = 0; t < n_terms; ++t) {
        const std::size_t anchor = rng() % lat.N;
        const bool two = max_support == 2 && lat.N > 1 && (rng() % 2 == 0);
        // coefficient in [-1, 1] from a 53-bit integer draw, platform-stable
        const double coeff = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
        if (two) {
            // partner: nearest-neighbour choice keeps terms R-local with small R
            std::vector<std::size_t> nbrs;
            for (std::size_t i = 0; i < lat.N; ++i)
                if (i != anchor && lat.d(anchor, i) == 1) nbrs.push_back(i);
            if (nbrs.empty()) { --t; continue; }
            const std::size_t partner = nbrs[rng() % nbrs.size()];
            std::string p;
            p += letters[rng() % 3];
            p += letters[rng() % 3];
            std::vector<std::size_t> sites{anchor, partner};
            if (sites[0] > sites[1]) { std::swap(sites[0], sites[1]); std::swap(p[0], p[1]); }
            terms.push_back(make_term(anchor, sites, p, coeff));
        } else {
            std::string p;
            p += letters[rng() % 3];
            terms.push_back(make_term(anchor, {anchor}, p, coeff));
        }
    }
    return terms;
}

HamiltonianModel random_two_local(const Lattice& lat, std::uint64_t seed) {
    return build_hamiltonian(random_local_terms(lat, seed, 2 * lat.N, 2), lat);
}

HamiltonianModel random_three_qubit(std::uint64_t seed, const Lattice& lat) {
    if (lat.N != 3) throw invalid_parameter("random_three_qubit: lattice must have 3 sites");
    return build_hamiltonian(random_local_terms(lat, seed, 6, 2), lat);
}

HamiltonianModel model_by_name(const std::string& name, const Lattice& lat,
                               std::uint64_t seed) {
    if (name == "zz-chain") return zz_chain(lat);
    if (name == "field") return field_model(lat);
    if (name.rfind("transverse-field", 0) == 0) {
        double g = 1.0;
        const auto colon = name.find(':');
        if (colon != std::string::npos) g = std::stod(name.substr(colon + 1));
        return transverse_field_chain(lat, g);
    }
    if (name == "random-2local") return random_two_local(lat, seed);
    throw invalid_parameter("unknown model family: " + name);
}

QuantumState state_by_name(const std::string& name, const HamiltonianModel& model) {
    if (name == "maximally-mixed") return maximally_mixed(model.N);
    if (name == "product-zero") {
        Matrix f(2, 2);
        f(0, 0) = 1.0;
        return product_state(std::vector<Matrix>(model.N, f));
    }
    if (name == "product-plus") {
        Matrix f(2, 2);
        f(0, 0) = f(0, 1) = f(1, 0) = f(1, 1) = 0.5;
        return product_state(std::vector<Matrix>(model.N, f));
    }
    if (name.rfind("gibbs:", 0) == 0) {
        const double beta = std::stod(name.substr(6));
        return gibbs_state(dense_hamiltonian(model), beta, model.N);
    }
    throw invalid_parameter("unknown state family: " + name);
}

std::vector<Term> terms_from_json(const std::string& json_text, const Lattice& lat) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw invalid_parameter(std::string("terms_from_json: parse error: ") + e.what());
    }
    if (!doc.is_array()) throw invalid_parameter("terms_from_json: expected a JSON array");
    std::vector<Term> terms;
    for (const auto& item : doc) {
        if (!item.contains("anchor") || !item.contains("sites") || !item.contains("pauli"))
            throw invalid_parameter("terms_from_json: term needs anchor, sites, pauli");
        const std::size_t anchor = item["anchor"].get<std::size_t>();
        std::vector<std::size_t> sites = item["sites"].get<std::vector<std::size_t>>();
        const std::string paulis = item["pauli"].get<std::string>();
        const double coeff = item.value("coeff", 1.0);
        if (anchor >= lat.N) throw invalid_parameter("terms_from_json: anchor out of range");
        for (std::size_t s : sites)
            if (s >= lat.N) throw invalid_parameter("terms_from_json: site out of range");
        terms.push_back(make_term(anchor, sites, paulis, coeff));
    }
    if (terms.empty()) throw invalid_parameter("terms_from_json: no terms");
    return terms;
}

} // namespace qclt
