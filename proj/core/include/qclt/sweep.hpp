#ifndef QCLT_SWEEP_HPP
#define QCLT_SWEEP_HPP

#include "qclt/esseen.hpp"
#include "qclt/spectral.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qclt {

enum class SweepPath { auto_select, exact, fast_commuting };

struct SweepConfig {
    std::string model = "zz-chain";
    std::string lattice = "chain"; // chain | ring
    std::string state = "maximally-mixed";
    std::vector<std::size_t> N_list;
    SweepPath path = SweepPath::auto_select;
    std::uint64_t seed = 1;
    double c0 = 0.5;
    EsseenConfig esseen;
    std::vector<double> esseen_omegas = {1.0, 2.0, 5.0, 10.0, -1.0}; // -1 -> sqrt(N)
    std::string decay = "none"; // none | exp:L0,xi | alg:L0,p
    std::string output_dir;     // empty -> no artifacts

    static SweepConfig from_json(const std::string& json_text);
    std::string to_json() const;
};

struct SweepRow {
    std::size_t N = 0;
    double sigma2 = 0.0;
    bool variance_ok = false;
    double delta = 0.0;
    double esseen_rhs_min = 0.0;
    std::optional<double> thm_bound; // empty -> not applicable
    double runtime_ms = 0.0;
    bool skipped = false;
    std::string skip_reason;
};

struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    std::size_t rows_used = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::optional<ScalingFit> fit;

    std::string to_csv(bool include_runtime = true) const;
    std::string to_json() const;
};

SweepResult run_sweep(const SweepConfig& cfg);

// least-squares slope of log(delta) vs log(N) over non-skipped rows with
// delta > 0; needs at least 4 such rows
ScalingFit fit_scaling(const SweepResult& result);

// results.csv, results.json, metadata.json (config hash, seed, version)
void write_artifacts(const SweepResult& result, const SweepConfig& cfg,
                     const std::string& dir);

} // namespace qclt

#endif
