#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cliquelab/clauses.hpp"
#include "cliquelab/detectors.hpp"
#include "cliquelab/hypergraph.hpp"

namespace cliquelab {

enum class FailureReason { None, PiBelowPiAtHeads, CycleMismatch };

struct CoupleStep {
    uint32_t index = 0;     // step number in the processing order
    int8_t answer = -1;     // 1 yes, 0 no, -1 star (the clique event A_j)
    bool included = false;  // h_j taken into H
    double pi_j = 0;
    double pi_j_prime = 0;  // modified r=3 algorithm; equals pi elsewhere
    bool approx = false;    // probability came from the particle estimator
};

struct CoupleOptions {
    double delta = 0.1;
    ClauseCaps caps{};
    int particles = 256;
    int burn_sweeps = 32;
    int step_sweeps = 1;
    bool keep_history = true;
};

struct CoupledOutcome {
    CoupledOutcome(UniformHypergraph h, UniformHypergraph g) : H(std::move(h)), G(std::move(g)) {}

    UniformHypergraph H;  // arity r
    UniformHypergraph G;  // arity s (2 for graphs)
    std::vector<CoupleStep> history;
    bool failed = false;
    FailureReason failure_reason = FailureReason::None;
    int approx_steps = 0;
    double p = 0, pi = 0;
    uint64_t seed = 0;
    int r = 0, s = 2;
    // modified r=3 algorithm only
    bool cycle_step_ran = false;
    std::vector<CleanThreeCycle> cycles_g, cycles_h;

    std::string to_json() const;
};

// The step-by-step coupling of H(n, pi) and G(n, p) with pi =
// (1-n^-delta) p^C(r,2): compute the conditional clique-event probability
// pi_j, toss a coin with probability pi/pi_j, and on heads reveal whether
// the clique event holds. Requires r >= 4.
CoupledOutcome riordan_couple(int n, int r, double p, uint64_t seed,
                              const CoupleOptions& opts = {});

// Same loop for any r > s >= 2 without the clean-3-cycle step. Failures are
// recorded outcomes; non-failed runs satisfy H subset-of cl(G) exactly.
CoupledOutcome couple_plain(int n, int r, int s, double p, uint64_t seed,
                            const CoupleOptions& opts = {});

// r = 3 variant: couple the clean-3-cycle collections first, then run the
// two-probability loop conditioned on them.
CoupledOutcome modified_couple_r3(int n, double p, uint64_t seed, const CoupleOptions& opts = {});

// The standard-coupling device: iid marks U_e on the base edges, G = {e :
// U_e <= p} and H = {h : max over E(h) of U_e <= q} with q = p (1 -
// n^-delta)^(1/C(r,s)). Containment H inside cl(G) holds by construction
// and each hyperedge lies in H with probability exactly (1-n^-delta)
// p^C(r,s); hyperedges sharing base edges are positively associated, which
// is the defect the algorithmic coupling exists to repair.
CoupledOutcome monotone_couple(int n, int r, int s, double p, uint64_t seed, double delta = 0.1);

// P(A_target | cliques of H0 all present) = p^m with m the number of
// target-clique base edges missing from the clique expansion of H0.
double pi_star(const UniformHypergraph& H0, const Edge& target, double p, int base_arity = 2);

// Sum of (pi_star - p^C(r,2)) over all r-sets containing v and not in H0.
// Only candidates meeting some H0-edge in >= 2 vertices contribute.
double extra_clique_sum(const UniformHypergraph& H0, int v, double p);

enum class ExtraCliqueClass { MiddleTriangle, AvoidableConfig, Unexplained };

// Classify the members of cl(G) \ H. On exact clique expansions the
// classification never reports Unexplained.
std::vector<std::pair<Edge, ExtraCliqueClass>> classify_extra_cliques(const UniformHypergraph& G,
                                                                      const UniformHypergraph& H);

}  // namespace cliquelab
