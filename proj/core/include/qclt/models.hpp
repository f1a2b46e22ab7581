#ifndef QCLT_MODELS_HPP
#define QCLT_MODELS_HPP

#include "qclt/lattice.hpp"
#include "qclt/operators.hpp"
#include "qclt/states.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qclt {

// Built-in model families.
HamiltonianModel zz_chain(const Lattice& lat, double coupling = 1.0);
HamiltonianModel transverse_field_chain(const Lattice& lat, double g = 1.0);
HamiltonianModel field_model(const Lattice& lat, double h = 1.0); // independent single-site Z

// Seeded random families (deterministic across platforms: mt19937_64 with
// explicit integer draws).
HamiltonianModel random_two_local(const Lattice& lat, std::uint64_t seed);
std::vector<Term> random_local_terms(const Lattice& lat, std::uint64_t seed,
                                     std::size_t n_terms, int max_support);
HamiltonianModel random_three_qubit(std::uint64_t seed, const Lattice& lat);

// "zz-chain" | "transverse-field[:g]" | "field" | "random-2local"
HamiltonianModel model_by_name(const std::string& name, const Lattice& lat,
                               std::uint64_t seed = 0);

// "maximally-mixed" | "product-zero" | "product-plus" | "gibbs:beta"
QuantumState state_by_name(const std::string& name, const HamiltonianModel& model);

// Pauli-string term list from a JSON array of
// {"anchor": int, "sites": [int...], "pauli": "XZ..", "coeff": real}.
std::vector<Term> terms_from_json(const std::string& json_text, const Lattice& lat);

} // namespace qclt

#endif
