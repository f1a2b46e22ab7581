#include "doctest.h"

#include "qclt/errors.hpp"
#include "qclt/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

using namespace qclt;

namespace {

SweepResult synthetic(const std::vector<double>& deltas) {
    SweepResult r;
    std::size_t N = 16;
    for (double d : deltas) {
        SweepRow row;
        row.N = N;
        row.delta = d;
        r.rows.push_back(row);
        N *= 2;
    }
    return r;
}

} // namespace

TEST_CASE("scaling fit") {
    // exact inverse-square-root data
    std::vector<double> d;
    for (int k = 0; k < 6; ++k) d.push_back(1.0 / std::sqrt(16.0 * std::pow(2.0, k)));
    auto fit = fit_scaling(synthetic(d));
    CHECK(fit.slope == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(fit.stderr_slope <= 1e-10);
    CHECK(fit.rows_used == 6);

    // constant data
    auto flat = fit_scaling(synthetic({0.3, 0.3, 0.3, 0.3, 0.3}));
    CHECK(flat.slope == doctest::Approx(0.0));

    // not enough rows
    CHECK_THROWS_AS(fit_scaling(synthetic({0.1, 0.2, 0.3})), insufficient_data);
}

TEST_CASE("sweep runs and is deterministic") {
    SweepConfig cfg;
    cfg.model = "zz-chain";
    cfg.state = "maximally-mixed";
    cfg.N_list = {16, 32, 64, 128, 256};
    cfg.path = SweepPath::fast_commuting;

    auto r1 = run_sweep(cfg);
    auto r2 = run_sweep(cfg);
    REQUIRE(r1.rows.size() == 5);
    for (const auto& row : r1.rows) {
        CHECK_FALSE(row.skipped);
        CHECK(row.delta > 0.0);
        CHECK(row.variance_ok);
        CHECK(row.delta <= row.esseen_rhs_min);
    }
    REQUIRE(r1.fit.has_value());
    CHECK(r1.fit->slope == doctest::Approx(-0.5).epsilon(0.1));

    // byte-identical without the runtime column
    CHECK(r1.to_csv(false) == r2.to_csv(false));
    CHECK(r1.to_csv(false) != r1.to_csv(true));
}

TEST_CASE("sweep config validation") {
    SweepConfig empty;
    empty.N_list = {};
    CHECK_THROWS_AS(run_sweep(empty), invalid_parameter);

    SweepConfig unsorted;
    unsorted.N_list = {64, 16};
    CHECK_THROWS_AS(run_sweep(unsorted), invalid_parameter);
}

TEST_CASE("config json round trip") {
    SweepConfig cfg;
    cfg.model = "zz-chain";
    cfg.N_list = {16, 64};
    cfg.seed = 9;
    cfg.decay = "exp:1.0,1.0";
    auto cfg2 = SweepConfig::from_json(cfg.to_json());
    CHECK(cfg2.model == cfg.model);
    CHECK(cfg2.N_list == cfg.N_list);
    CHECK(cfg2.seed == cfg.seed);
    CHECK(cfg2.decay == cfg.decay);
}

TEST_CASE("artifacts on disk") {
    SweepConfig cfg;
    cfg.model = "zz-chain";
    cfg.N_list = {16, 32, 64, 128};
    cfg.path = SweepPath::fast_commuting;
    auto res = run_sweep(cfg);

    const std::string dir = "sweep_artifacts_test";
    write_artifacts(res, cfg, dir);
    std::ifstream csv(dir + "/results.csv");
    REQUIRE(csv.good());
    std::stringstream ss;
    ss << csv.rdbuf();
    CHECK(ss.str() == res.to_csv(true));
    CHECK(std::ifstream(dir + "/results.json").good());
    std::ifstream meta(dir + "/metadata.json");
    REQUIRE(meta.good());
    std::stringstream ms;
    ms << meta.rdbuf();
    CHECK(ms.str().find("seed") != std::string::npos);
    std::remove((dir + "/results.csv").c_str());
    std::remove((dir + "/results.json").c_str());
    std::remove((dir + "/metadata.json").c_str());
}
