#include <cstdlib>
#include <stdexcept>

#include "doctest.h"

#include "cliquelab/harness.hpp"
#include "cliquelab/stats.hpp"

using namespace cliquelab;

TEST_CASE("wilson interval") {
    auto [lo0, hi0] = wilson_interval(0, 10);
    CHECK(lo0 == 0.0);
    auto [lo1, hi1] = wilson_interval(10, 10);
    CHECK(hi1 == 1.0);
    auto [lo, hi] = wilson_interval(50, 100);
    CHECK(lo == doctest::Approx(0.4038).epsilon(1e-3));
    CHECK(hi == doctest::Approx(0.5962).epsilon(1e-3));
    CHECK(lo <= 0.5);
    CHECK(hi >= 0.5);
    CHECK_THROWS_AS(wilson_interval(5, 0), std::invalid_argument);
    CHECK_THROWS_AS(wilson_interval(11, 10), std::invalid_argument);
}

TEST_CASE("config validation and round trip") {
    ExperimentConfig cfg;
    cfg.kind = "matching_at_th";
    cfg.n_list = {9, 12};
    cfg.r = 3;
    cfg.trials = 4;
    cfg.validate();
    auto j = cfg.to_json();
    auto back = ExperimentConfig::from_json(j);
    CHECK(back.kind == cfg.kind);
    CHECK(back.n_list == cfg.n_list);
    CHECK(back.trials == cfg.trials);

    ExperimentConfig bad = cfg;
    bad.kind = "nonsense";
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.trials = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("single-trial experiment reproduces the single op") {
    ExperimentConfig cfg;
    cfg.kind = "matching_at_th";
    cfg.n_list = {9};
    cfg.r = 3;
    cfg.trials = 1;
    cfg.master_seed = 5;
    auto rep = run_experiment(cfg);
    REQUIRE(rep.rows.size() == 1);
    REQUIRE(rep.aggregates.size() == 1);
    CHECK(rep.aggregates[0].trials == 1);
    CHECK((rep.aggregates[0].point == 0.0 || rep.aggregates[0].point == 1.0));
}

TEST_CASE("determinism: serial equals parallel, byte for byte") {
    ExperimentConfig cfg;
    cfg.kind = "factor_at_tg";
    cfg.n_list = {9, 12};
    cfg.r = 3;
    cfg.trials = 40;
    cfg.master_seed = 11;
    auto serial = run_experiment_serial(cfg);
    auto parallel = run_experiment(cfg);
    CHECK(serial.to_csv() == parallel.to_csv());
    auto again = run_experiment(cfg);
    CHECK(parallel.to_csv() == again.to_csv());

    // aggregates line up with the rows
    for (const auto& agg : parallel.aggregates) CHECK(agg.trials == 40);
}

TEST_CASE("row errors are outcomes, not crashes") {
    ExperimentConfig cfg;
    cfg.kind = "chain";
    cfg.n_list = {10};  // not divisible by r = 3: every trial rejects
    cfg.r = 3;
    cfg.trials = 3;
    cfg.pi_i = 0.002;
    cfg.pi_r = 0.02;
    auto rep = run_experiment(cfg);
    REQUIRE(rep.rows.size() == 3);
    for (const auto& row : rep.rows) CHECK(row.contains("error"));
    CHECK(rep.aggregates[0].successes == 0);
}

TEST_CASE("report emission and round trip") {
    ExperimentConfig cfg;
    cfg.kind = "matching_at_th";
    cfg.n_list = {9};
    cfg.r = 3;
    cfg.trials = 5;
    auto rep = run_experiment(cfg);

    auto j = rep.to_json();
    auto back = ExperimentReport::from_json(j);
    CHECK(back.to_json() == j);

    // csv schema: documented column order
    auto csv = rep.to_csv();
    CHECK(csv.rfind("seed,n,t_h,matching,budget_exceeded\n", 0) == 0);
    size_t lines = std::count(csv.begin(), csv.end(), '\n');
    CHECK(lines == 6);  // header + 5 rows

    emit_report(rep, "csv", "/tmp/cliquelab_test_report.csv");
    emit_report(rep, "json", "/tmp/cliquelab_test_report.json");
}

TEST_CASE("analytic experiment kind") {
    ExperimentConfig cfg;
    cfg.kind = "analytic";
    cfg.n_list = {0};
    cfg.r = 6;  // r_max
    int pairs = 0;
    for (int s = 3; s < 6; ++s)
        for (int r = s + 1; r <= 6; ++r) ++pairs;
    cfg.trials = static_cast<uint64_t>(pairs);
    auto rep = run_experiment(cfg);
    CHECK(rep.aggregates[0].successes == static_cast<uint64_t>(pairs));
}

TEST_CASE("empty report emits a header-only csv") {
    ExperimentReport rep;
    rep.columns = {"seed", "n", "x"};
    CHECK(rep.to_csv() == "seed,n,x\n");
}
