#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace cliquelab {

inline constexpr const char* kVersion = "cliquelab 0.1.0";

// One verdict-producing experiment: kind, sizes, trial count, master seed
// and the validated constant overrides. Loadable from a JSON preset.
struct ExperimentConfig {
    std::string kind;
    std::vector<int> n_list{18};
    int r = 3;
    int s = 2;
    uint64_t trials = 100;
    uint64_t master_seed = 1;
    double delta = 0.1;
    double pi_i = -1;        // chain: override for pi_I (<0: canonical)
    double pi_r = -1;        // chain/thinning: override for pi_R
    double c_i = -1, c_r = -1;
    double g_override = -1;
    double p_override = -1;  // couple experiments: explicit p (else p_plus)
    int particles = 256;
    bool r3_cycle_step = false;
    std::string static_mode = "monotone";  // chain pair provider: monotone | algorithm
    std::string out;
    std::string format = "csv";

    void validate() const;
    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig from_file(const std::string& path);
    nlohmann::json to_json() const;
};

struct Aggregate {
    int n = 0;
    uint64_t trials = 0;
    uint64_t successes = 0;
    double point = 0;
    double wilson_lo = 0, wilson_hi = 0;
};

struct ExperimentReport {
    nlohmann::json config_echo;
    std::vector<std::string> columns;       // CSV column order
    std::vector<nlohmann::json> rows;       // one object per trial
    std::vector<Aggregate> aggregates;      // per n, in n_list order
    nlohmann::json extra;                   // kind-specific aggregate statistics
    double wall_clock_ms = 0;
    std::string version = kVersion;

    std::string to_csv() const;             // rows only; deterministic
    nlohmann::json to_json() const;
    static ExperimentReport from_json(const nlohmann::json& j);
};

// Fans trials across workers with per-trial streams (master_seed, index);
// results are merged by index, so the report does not depend on the worker
// count. CLIQUELAB_THREADS caps the OpenMP team; 1 runs the serial path.
ExperimentReport run_experiment(const ExperimentConfig& config);

// Serial reference implementation of the same loop, kept for tests and the
// benchmark target.
ExperimentReport run_experiment_serial(const ExperimentConfig& config);

void emit_report(const ExperimentReport& report, const std::string& format,
                 const std::string& path);

int worker_count();

}  // namespace cliquelab
