// Command-line front end: run experiments, single couplings and the
// analytic verifiers; emit CSV/JSON reports.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "cliquelab/coupling.hpp"
#include "cliquelab/harness.hpp"
#include "cliquelab/process.hpp"
#include "cliquelab/stats.hpp"
#include "cliquelab/sunify.hpp"
#include "cliquelab/time_coupling.hpp"

using namespace cliquelab;

namespace {

struct CommonArgs {
    std::vector<int> n_list;
    int r = 3, s = 2;
    uint64_t trials = 0;
    uint64_t seed = 1;
    double delta = 0.1;
    double c_i = -1, c_r = -1;
    double pi_i = -1, pi_r = -1;
    std::string out, format = "csv", preset;
    bool check = false;
    double check_threshold = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--n", args.n_list, "vertex counts");
    cmd->add_option("--r", args.r, "clique / hyperedge size");
    cmd->add_option("--s", args.s, "base arity");
    cmd->add_option("--trials", args.trials, "trials per n");
    cmd->add_option("--seed", args.seed, "master seed");
    cmd->add_option("--delta", args.delta, "window exponent delta");
    cmd->add_option("--c-i", args.c_i, "constant multiplier for pi_I");
    cmd->add_option("--c-r", args.c_r, "constant multiplier for pi_R");
    cmd->add_option("--pi-i", args.pi_i, "explicit pi_I override");
    cmd->add_option("--pi-r", args.pi_r, "explicit pi_R override");
    cmd->add_option("--out", args.out, "output path (default stdout)");
    cmd->add_option("--format", args.format, "csv or json");
    cmd->add_option("--preset", args.preset, "JSON preset file");
    cmd->add_flag("--check", args.check, "exit 2 if the success rate misses --threshold");
    cmd->add_option("--threshold", args.check_threshold, "acceptance threshold for --check");
}

ExperimentConfig config_from(const CommonArgs& args, const std::string& kind,
                             std::vector<int> default_n, uint64_t default_trials) {
    ExperimentConfig cfg;
    if (!args.preset.empty()) {
        cfg = ExperimentConfig::from_file(args.preset);
    } else {
        cfg.kind = kind;
        cfg.n_list = std::move(default_n);
        cfg.trials = default_trials;
    }
    if (!args.n_list.empty()) cfg.n_list = args.n_list;
    if (args.trials > 0) cfg.trials = args.trials;
    cfg.r = args.r;
    cfg.s = args.s;
    cfg.master_seed = args.seed;
    cfg.delta = args.delta;
    cfg.c_i = args.c_i;
    cfg.c_r = args.c_r;
    cfg.pi_i = args.pi_i;
    cfg.pi_r = args.pi_r;
    if (!args.out.empty()) cfg.out = args.out;
    cfg.format = args.format;
    return cfg;
}

int finish(const ExperimentReport& report, const ExperimentConfig& cfg, const CommonArgs& args) {
    std::string payload =
        cfg.format == "json" ? report.to_json().dump(2) + "\n" : report.to_csv();
    if (cfg.out.empty()) {
        std::cout << payload;
    } else {
        emit_report(report, cfg.format, cfg.out);
    }
    for (const auto& agg : report.aggregates)
        std::fprintf(stderr, "n=%d  %llu/%llu  point %.4f  wilson [%.4f, %.4f]\n", agg.n,
                     static_cast<unsigned long long>(agg.successes),
                     static_cast<unsigned long long>(agg.trials), agg.point, agg.wilson_lo,
                     agg.wilson_hi);
    if (!report.extra.is_null() && !report.extra.empty())
        std::fprintf(stderr, "extra: %s\n", report.extra.dump().c_str());
    if (args.check && args.check_threshold >= 0) {
        for (const auto& agg : report.aggregates)
            if (agg.point < args.check_threshold) return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cliquelab: random (hyper)graph process and coupling experiments"};
    app.require_subcommand(1);

    CommonArgs args;

    auto* simulate = app.add_subcommand("simulate", "run an experiment preset or kind");
    std::string kind;
    simulate->add_option("--kind", kind, "experiment kind (or use --preset)");
    add_common(simulate, args);

    auto* hitting = app.add_subcommand("hitting", "hitting-time experiments on a single process");
    std::string property = "factor";
    hitting->add_option("--property", property, "factor (clique cover) or matching (min degree)");
    add_common(hitting, args);

    auto* couple = app.add_subcommand("couple", "static coupling marginals");
    bool r3_cycles = false;
    couple->add_flag("--r3-cycles", r3_cycles, "use the modified r=3 algorithm");
    add_common(couple, args);

    auto* chain = app.add_subcommand("chain", "composed process coupling verdicts");
    add_common(chain, args);

    auto* suniform = app.add_subcommand("suniform", "s-uniform chain verdicts");
    add_common(suniform, args);

    auto* badevents = app.add_subcommand("badevents", "bad-event frequencies at pi_plus");
    add_common(badevents, args);

    auto* analytic = app.add_subcommand("analytic", "exhaustive analytic lemma verification");
    int r_max = 10;
    analytic->add_option("--r-max", r_max, "verify all 3 <= s < r <= r-max");
    add_common(analytic, args);

    auto* window = app.add_subcommand("window", "print critical-window parameters");
    add_common(window, args);

    auto* report_cmd = app.add_subcommand("report", "re-emit a JSON report");
    std::string report_in;
    report_cmd->add_option("in", report_in, "input JSON report")->required();
    add_common(report_cmd, args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            ExperimentConfig cfg = config_from(args, kind, {18}, 100);
            auto report = run_experiment(cfg);
            return finish(report, cfg, args);
        }
        if (hitting->parsed()) {
            std::string k = property == "matching" ? "matching_at_th" : "factor_at_tg";
            ExperimentConfig cfg = config_from(args, k, {12}, 200);
            auto report = run_experiment(cfg);
            return finish(report, cfg, args);
        }
        if (couple->parsed()) {
            ExperimentConfig cfg =
                config_from(args, r3_cycles ? "couple_r3" : "couple_marginals", {9}, 200);
            cfg.r3_cycle_step = r3_cycles;
            auto report = run_experiment(cfg);
            return finish(report, cfg, args);
        }
        if (chain->parsed()) {
            ExperimentConfig cfg = config_from(args, "chain", {12}, 100);
            auto report = run_experiment(cfg);
            return finish(report, cfg, args);
        }
        if (suniform->parsed()) {
            ExperimentConfig cfg = config_from(args, "suniform", {8}, 100);
            if (cfg.s < 3) cfg.s = 3;
            if (cfg.r <= cfg.s) cfg.r = cfg.s + 1;
            auto report = run_experiment(cfg);
            return finish(report, cfg, args);
        }
        if (badevents->parsed()) {
            ExperimentConfig cfg = config_from(args, "badevents", {60}, 200);
            auto report = run_experiment(cfg);
            return finish(report, cfg, args);
        }
        if (analytic->parsed()) {
            ExperimentConfig cfg = config_from(args, "analytic", {0}, 1);
            cfg.r = r_max;
            int pairs = 0;
            for (int s = 3; s < r_max; ++s)
                for (int r = s + 1; r <= r_max; ++r) ++pairs;
            cfg.trials = static_cast<uint64_t>(pairs);
            cfg.n_list = {0};
            auto report = run_experiment(cfg);
            return finish(report, cfg, args);
        }
        if (window->parsed()) {
            int n = args.n_list.empty() ? 100 : args.n_list[0];
            std::cout << window_params(n, args.r, args.s, args.delta).to_report();
            return 0;
        }
        if (report_cmd->parsed()) {
            std::ifstream in(report_in);
            if (!in) throw std::runtime_error("cannot open " + report_in);
            nlohmann::json j;
            in >> j;
            auto report = ExperimentReport::from_json(j);
            if (args.format == "csv")
                std::cout << report.to_csv();
            else
                std::cout << report.to_json().dump(2) << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
