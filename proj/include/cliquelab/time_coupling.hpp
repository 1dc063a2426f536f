#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cliquelab/coupling.hpp"
#include "cliquelab/hypergraph.hpp"
#include "cliquelab/process.hpp"

namespace cliquelab {

// One oriented shared-base-edge record: the keeper retains the shared edge
// in its time block, the excluder replaces it by an independent dummy mark.
struct PartnerRecord {
    size_t keeper = 0;    // index into h_edges
    size_t excluder = 0;  // index into h_edges
    Edge shared_edge;
    double xi_prime = 0;
};

struct TimeOrders {
    int n = 0, r = 0, s = 2;
    std::vector<Edge> g_edges;
    std::vector<double> tau_edge;  // parallel to g_edges
    std::vector<Edge> h_edges;
    std::vector<double> tau_hyperedge;  // parallel to h_edges
    std::vector<double> tau_clique;     // max edge time of E(h), parallel to h_edges
    std::vector<PartnerRecord> partner_pairs;
    std::vector<char> in_s2;  // hyperedge has at least one excluded edge
    std::vector<size_t> sigma_g, sigma_h;  // ascending-time permutations
};

struct TimeOrderOptions {
    // Spec-literal structure checks: no overlaps of three or more vertices,
    // at most one partner per hyperedge, partner pairs vertex-disjoint.
    // The default construction handles arbitrary sharing by orienting every
    // shared base edge to a unique keeper, which preserves uniformity of
    // sigma_H (the time blocks stay disjoint).
    bool strict_preconditions = false;
};

// Auxiliary times: tau(e) iid uniform for e in G; tau(h) the maximum over
// h's block (clique edges minus excluded shared edges, plus dummies).
// Requires H inside cl(G); throws with the offending witness otherwise.
TimeOrders build_time_orders(const UniformHypergraph& G, const UniformHypergraph& H, uint64_t seed,
                             const TimeOrderOptions& opts = {});

struct HittingComparison {
    std::optional<double> t_g, t_h;
    bool equal = false;
};

HittingComparison hitting_comparison(const TimeOrders& orders);

// E = H(t_H) \ cl(G(t_G)). The structural flags are conditional on
// matching hitting times: whenever t_G = t_H, every member lies in S2 and
// carries an excluded edge whose keeper misses H(t_H). When the hitting
// times differ, hyperedges arriving between t_G and t_H enter E without
// exclusions, so subset_s2 can be false.
struct ExceptionalSet {
    std::vector<Edge> members;
    bool subset_s2 = true;
    bool keepers_outside = true;
};

ExceptionalSet exceptional_set(const TimeOrders& orders);

struct RandomSetBundle {
    size_t t_h = 0;
    std::vector<Edge> h_at_th;  // canonical order; x_h / pi_h run parallel
    double pi_i = 0, pi_r = 0;
    std::vector<int> x_h;
    std::vector<double> pi_h;
    std::vector<Edge> i_set, r_prime, r_set, f_set;
    std::vector<Edge> extended_order;  // prefix ++ I (uniform) ++ rest (uniform)
};

// Exclusive-partner random set construction. c_i < 0 and c_r < 0 resolve to
// the canonical constants 10*r! and 10*r^4; the resulting probabilities must
// land in [0,1] (and pi_h <= pi_R), otherwise the call is rejected with
// scaling guidance.
RandomSetBundle build_random_set(const ProcessTrace& trace, int r, double g_value, double c_i,
                                 double c_r, uint64_t seed);

struct ThinResult {
    std::vector<Edge> thinned_order;
    std::vector<char> removed;  // parallel to the input order
    size_t t0 = 0;              // thinned position of the last prefix survivor
    bool min_degree_ok = false; // thinned prefix at t0 covers every vertex
};

ThinResult thin_process(const ProcessTrace& trace, double pi_r, uint64_t seed);

enum class ChainStage { Ok, CouplingFailed, Degenerate, Uncovered };

// Provider of the statically coupled (G, H) pair the chain starts from.
// Algorithm is the step-by-step exact-law coupling; it fails often at desk
// scale, and failed trials reject. Monotone is the standard-coupling subset
// device: containment always holds and each hyperedge has the right
// marginal, at the price of positive association between overlapping
// hyperedges.
enum class StaticMode { Monotone, Algorithm };

struct ChainOptions {
    double delta = 0.1;
    double pi_i_override = -1;  // <0: canonical 10*r!*g/n^(r-1)
    double pi_r_override = -1;  // <0: canonical 10*r^4*g/n
    CoupleOptions couple{};
    StaticMode static_mode = StaticMode::Monotone;
    bool r3_cycle_step = false;
    uint64_t solver_budget = 50'000'000;
};

struct ChainVerdict {
    uint64_t seed = 0;
    int n = 0, r = 0, s = 2;
    ChainStage stage = ChainStage::Ok;
    bool coupling_failed = false;
    bool containment = false;  // H'_{T'_H} within cl(G_{T_G})
    bool matching = false;     // perfect matching of H'_{T'_H}
    bool factor = false;       // K_r^{(s)}-factor of G_{T_G}
    bool t_eq = false;
    int e_size = 0;
    bool e_subset_s2 = true;
    bool e_partner_window = true;  // partners of exceptional members arrive within floor(g n) steps
    bool f_in_r = false;
    bool thin_ok = false;
    int approx_steps = 0;
    double runtime_ms = 0;

    static std::string csv_header();
    std::string csv_row() const;
};

// The composed coupling: static couple, auxiliary-time orders, exceptional
// set, exclusive-partner random set on the glued process, thinning, and the
// final verdicts. n must be divisible by r.
ChainVerdict chain_coupling(int n, int r, uint64_t seed, const ChainOptions& opts = {});

// Same chain over an s-uniform base process (no dummy machinery needed when
// no base edges are shared).
ChainVerdict chain_coupling_general(int n, int r, int s, uint64_t seed,
                                    const ChainOptions& opts = {});

}  // namespace cliquelab
