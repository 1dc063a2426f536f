// Benchmark: serial reference loop vs the OpenMP trial fan-out, plus the
// incremental clique-cover scan vs the per-prefix rescan.

#include <chrono>
#include <cstdio>

#include "cliquelab/harness.hpp"
#include "cliquelab/process.hpp"

using namespace cliquelab;

namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

}  // namespace

int main() {
    ExperimentConfig cfg;
    cfg.kind = "factor_at_tg";
    cfg.n_list = {15, 18};
    cfg.r = 3;
    cfg.trials = 300;
    cfg.master_seed = 7;

    auto t0 = std::chrono::steady_clock::now();
    auto serial = run_experiment_serial(cfg);
    double serial_ms = ms_since(t0);

    t0 = std::chrono::steady_clock::now();
    auto parallel = run_experiment(cfg);
    double parallel_ms = ms_since(t0);

    bool identical = serial.to_csv() == parallel.to_csv();
    std::printf("experiment fan-out: serial %.1f ms, %d workers %.1f ms, speedup %.2fx, %s\n",
                serial_ms, worker_count(), parallel_ms, serial_ms / parallel_ms,
                identical ? "outputs identical" : "OUTPUT MISMATCH");

    // clique-cover hitting time: incremental vs rescan reference
    double inc_ms = 0, rescan_ms = 0;
    for (uint64_t seed = 0; seed < 20; ++seed) {
        auto trace = standard_process(14, 2, seed);
        t0 = std::chrono::steady_clock::now();
        size_t a = hitting_time_clique_cover(trace, 3);
        inc_ms += ms_since(t0);
        t0 = std::chrono::steady_clock::now();
        size_t b = hitting_time_clique_cover_rescan(trace, 3);
        rescan_ms += ms_since(t0);
        if (a != b) {
            std::printf("clique-cover scan MISMATCH at seed %llu\n",
                        static_cast<unsigned long long>(seed));
            return 1;
        }
    }
    std::printf("clique-cover scan (n=14, r=3, 20 traces): incremental %.1f ms, rescan %.1f ms, "
                "speedup %.1fx\n",
                inc_ms, rescan_ms, rescan_ms / inc_ms);
    return identical ? 0 : 1;
}
